"""Treeplexes: sequence-form strategy sets for sequential decision problems.

A treeplex is built from decision points (information sets), each with a
fixed action count and, per action, a list of child decision points.  The
empty root sequence has id 0 and carries probability mass 1; the actions
of decision point j occupy the contiguous sequence ids
seq_offset[j] .. seq_offset[j] + n_j - 1, so seq_count = 1 + sum(n_j).
Decision points that are nobody's child hang directly off the root
sequence, which also stands in for the single action of the dummy root
decision point used when a game has several initial information sets.

Perfect recall means every decision point is reachable through exactly
one parent sequence; the constructor rejects child maps that share a
decision point between two parent actions, and parent graphs that do not
topologically order (cycles).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .errors import (
    DimensionError,
    IncompleteStrategy,
    InvalidInput,
    InvalidSequenceForm,
    MalformedTree,
    PerfectRecallViolation,
)
from .nfg import SimplexStrategy

FLOW_TOL = 1e-9


class Treeplex:
    """Validated sequential strategy set over a perfect-recall tree."""

    def __init__(self, action_counts: Sequence[int], children: Dict[Tuple[int, int], Sequence[int]]):
        self.n = np.asarray(action_counts, dtype=np.int64)
        if self.n.ndim != 1 or self.n.size == 0 or np.any(self.n < 1):
            raise InvalidInput("need at least one decision point, all with actions")
        J = self.n.size
        self.seq_offset = np.ones(J, dtype=np.int64)
        self.seq_offset[1:] = 1 + np.cumsum(self.n[:-1])
        self.seq_count = int(1 + self.n.sum())

        # normalize the child map and derive each decision point's parent
        self.children: List[List[List[int]]] = [
            [[] for _ in range(int(self.n[j]))] for j in range(J)
        ]
        parent: List[Optional[Tuple[int, int]]] = [None] * J
        for (j, a), kids in children.items():
            if not (0 <= j < J) or not (0 <= a < self.n[j]):
                raise InvalidInput(f"child map key ({j},{a}) out of range")
            for c in kids:
                if not (0 <= c < J):
                    raise InvalidInput(f"child id {c} out of range")
                if parent[c] is not None:
                    raise PerfectRecallViolation(
                        f"decision point {c} is a child of both "
                        f"{parent[c]} and {(j, a)}"
                    )
                parent[c] = (j, a)
                self.children[j][a].append(c)
        for j in range(J):
            for a in range(int(self.n[j])):
                self.children[j][a].sort()

        self.parent_seq = np.zeros(J, dtype=np.int64)
        for c, p in enumerate(parent):
            if p is not None:
                self.parent_seq[c] = self.seq_id(p[0], p[1])

        # topological order, children before parents; a cycle leaves
        # some decision point forever unordered
        indeg = np.zeros(J, dtype=np.int64)
        for j in range(J):
            for a in range(int(self.n[j])):
                indeg[j] += len(self.children[j][a])
        order: List[int] = [j for j in range(J) if indeg[j] == 0]
        head = 0
        child_owner = {c: p for c, p in enumerate(parent) if p is not None}
        while head < len(order):
            j = order[head]
            head += 1
            p = child_owner.get(j)
            if p is not None:
                indeg[p[0]] -= 1
                if indeg[p[0]] == 0:
                    order.append(p[0])
        if len(order) != J:
            raise MalformedTree("child map contains a cycle")
        self.bottom_up: List[int] = order
        self.top_down: List[int] = order[::-1]

    @property
    def num_decision_points(self) -> int:
        return int(self.n.size)

    def seq_id(self, j: int, a: int) -> int:
        return int(self.seq_offset[j] + a)

    def seq_slice(self, j: int) -> slice:
        off = int(self.seq_offset[j])
        return slice(off, off + int(self.n[j]))

    @classmethod
    def from_parents(cls, action_counts: Sequence[int], parent_seq: Sequence[int]) -> "Treeplex":
        """Rebuild from per-decision-point parent sequence ids."""
        n = list(action_counts)
        offsets = [1]
        for c in n[:-1]:
            offsets.append(offsets[-1] + c)

        def owner(seq: int) -> Optional[Tuple[int, int]]:
            for j, off in enumerate(offsets):
                if off <= seq < off + n[j]:
                    return j, seq - off
            return None

        children: Dict[Tuple[int, int], List[int]] = {}
        for c, p in enumerate(parent_seq):
            if p == 0:
                continue
            key = owner(int(p))
            if key is None:
                raise InvalidInput(f"parent sequence {p} does not exist")
            children.setdefault(key, []).append(c)
        return cls(n, children)

    def to_text(self) -> str:
        lines = [f"treeplex {self.num_decision_points} {self.seq_count}"]
        for j in range(self.num_decision_points):
            lines.append(f"{j} {int(self.parent_seq[j])} {int(self.n[j])}")
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "Treeplex":
        lines = [ln for ln in text.splitlines() if ln.strip()]
        head = lines[0].split()
        if head[0] != "treeplex" or len(head) != 3:
            raise InvalidInput("expected 'treeplex J seq_count' header")
        J = int(head[1])
        counts = [0] * J
        parents = [0] * J
        for ln in lines[1 : 1 + J]:
            j, p, nj = (int(v) for v in ln.split())
            counts[j] = nj
            parents[j] = p
        t = cls.from_parents(counts, parents)
        if t.seq_count != int(head[2]):
            raise InvalidInput("sequence count mismatch in serialized treeplex")
        return t


class SequenceFormStrategy:
    """Realization-plan vector over sequences; x[0] = 1, flow conserved."""

    __slots__ = ("values",)

    def __init__(self, treeplex: Treeplex, values):
        v = np.asarray(values, dtype=np.float64).ravel()
        if v.size != treeplex.seq_count:
            raise InvalidSequenceForm(
                f"expected {treeplex.seq_count} sequence values, got {v.size}"
            )
        if abs(v[0] - 1.0) > FLOW_TOL:
            raise InvalidSequenceForm("root sequence must carry mass 1")
        if np.any(v < -FLOW_TOL) or np.any(v > 1.0 + FLOW_TOL):
            raise InvalidSequenceForm("sequence values must lie in [0, 1]")
        for j in range(treeplex.num_decision_points):
            seg = v[treeplex.seq_slice(j)]
            if abs(seg.sum() - v[treeplex.parent_seq[j]]) > FLOW_TOL:
                raise InvalidSequenceForm(
                    f"flow violated at decision point {j}"
                )
        v = np.clip(v, 0.0, 1.0)
        v[0] = 1.0
        v.setflags(write=False)
        self.values = v

    def __len__(self) -> int:
        return self.values.size


def behavior_to_sequence(treeplex: Treeplex, behavior) -> SequenceFormStrategy:
    """Top-down product of behavior probabilities along parent sequences.

    `behavior` maps decision point -> SimplexStrategy (dict or list).
    """
    x = np.zeros(treeplex.seq_count)
    x[0] = 1.0
    for j in treeplex.top_down:
        try:
            bj = behavior[j]
        except (KeyError, IndexError):
            raise IncompleteStrategy(f"no behavior given at decision point {j}")
        probs = bj.probs if isinstance(bj, SimplexStrategy) else np.asarray(bj, dtype=np.float64)
        if probs.size != treeplex.n[j]:
            raise DimensionError(
                f"decision point {j} has {treeplex.n[j]} actions, "
                f"behavior has {probs.size}"
            )
        x[treeplex.seq_slice(j)] = x[treeplex.parent_seq[j]] * probs
    return SequenceFormStrategy(treeplex, x)


def sequence_to_behavior(treeplex: Treeplex, x: SequenceFormStrategy) -> List[SimplexStrategy]:
    """Per-decision-point conditionals; uniform where the parent is unreached."""
    v = x.values
    out: List[SimplexStrategy] = []
    for j in range(treeplex.num_decision_points):
        mass = v[treeplex.parent_seq[j]]
        if mass > 0.0:
            out.append(SimplexStrategy(v[treeplex.seq_slice(j)] / mass))
        else:
            out.append(SimplexStrategy.uniform(int(treeplex.n[j])))
    return out


def uniform_behavior(treeplex: Treeplex) -> List[SimplexStrategy]:
    return [
        SimplexStrategy.uniform(int(treeplex.n[j]))
        for j in range(treeplex.num_decision_points)
    ]


@dataclass
class CounterfactualValues:
    per_decision_point: List[np.ndarray]  # local loss vector at each j
    node_values: np.ndarray  # <local loss, behavior> per j
    root_value: float  # equals <loss, sequence form> of the behavior


def counterfactual_values(treeplex: Treeplex, loss, behavior) -> CounterfactualValues:
    """Bottom-up local losses: own sequence loss plus child node values."""
    l = np.asarray(loss, dtype=np.float64)
    if l.size != treeplex.seq_count:
        raise DimensionError(
            f"loss has {l.size} entries, treeplex has {treeplex.seq_count}"
        )
    J = treeplex.num_decision_points
    local: List[Optional[np.ndarray]] = [None] * J
    values = np.zeros(J)
    for j in treeplex.bottom_up:
        lj = l[treeplex.seq_slice(j)].copy()
        for a in range(int(treeplex.n[j])):
            for c in treeplex.children[j][a]:
                lj[a] += values[c]
        bj = behavior[j]
        probs = bj.probs if isinstance(bj, SimplexStrategy) else np.asarray(bj, dtype=np.float64)
        local[j] = lj
        values[j] = float(lj @ probs)
    root = float(l[0]) + sum(
        values[j] for j in range(J) if treeplex.parent_seq[j] == 0
    )
    return CounterfactualValues(
        per_decision_point=local, node_values=values, root_value=root
    )


def best_response(treeplex: Treeplex, loss) -> Tuple[float, SequenceFormStrategy]:
    """Minimizing pure strategy via bottom-up dynamic programming.

    Ties break toward the lowest action index.  The returned value counts
    the root-sequence loss entry, so it equals <loss, strategy>.
    """
    l = np.asarray(loss, dtype=np.float64)
    if l.size != treeplex.seq_count:
        raise DimensionError(
            f"loss has {l.size} entries, treeplex has {treeplex.seq_count}"
        )
    J = treeplex.num_decision_points
    best_val = np.zeros(J)
    best_act = np.zeros(J, dtype=np.int64)
    for j in treeplex.bottom_up:
        vals = l[treeplex.seq_slice(j)].copy()
        for a in range(int(treeplex.n[j])):
            for c in treeplex.children[j][a]:
                vals[a] += best_val[c]
        best_act[j] = int(np.argmin(vals))  # argmin takes the first minimum
        best_val[j] = vals[best_act[j]]
    x = np.zeros(treeplex.seq_count)
    x[0] = 1.0
    for j in treeplex.top_down:
        x[treeplex.seq_id(j, int(best_act[j]))] = x[treeplex.parent_seq[j]]
    value = float(l[0]) + sum(
        best_val[j] for j in range(J) if treeplex.parent_seq[j] == 0
    )
    return value, SequenceFormStrategy(treeplex, x)


class SparsePayoff:
    """Sparse bilinear payoff over sequence pairs, chance already folded in.

    Duplicate (row, col) entries are coalesced by summation at
    construction, so each sequence pair appears at most once.
    """

    def __init__(self, n_x: int, n_y: int, entries):
        rows, cols, vals = [], [], []
        for xi, yi, v in entries:
            if not (0 <= xi < n_x) or not (0 <= yi < n_y):
                raise InvalidInput(f"payoff entry ({xi},{yi}) out of range")
            rows.append(xi)
            cols.append(yi)
            vals.append(float(v))
        combined: Dict[Tuple[int, int], float] = {}
        for xi, yi, v in zip(rows, cols, vals):
            combined[(xi, yi)] = combined.get((xi, yi), 0.0) + v
        keys = sorted(combined)
        self.shape = (n_x, n_y)
        self.rows = np.array([k[0] for k in keys], dtype=np.int64)
        self.cols = np.array([k[1] for k in keys], dtype=np.int64)
        self.vals = np.array([combined[k] for k in keys], dtype=np.float64)
        for arr in (self.rows, self.cols, self.vals):
            arr.setflags(write=False)

    def scaled(self, factor: float) -> "SparsePayoff":
        return SparsePayoff(
            self.shape[0],
            self.shape[1],
            zip(self.rows, self.cols, self.vals * factor),
        )

    def loss_x(self, y: np.ndarray) -> np.ndarray:
        """G y: the x-player's per-sequence loss field."""
        out = np.zeros(self.shape[0])
        np.add.at(out, self.rows, self.vals * y[self.cols])
        return out

    def gain_y(self, x: np.ndarray) -> np.ndarray:
        """G' x: the y-player's per-sequence gain field."""
        out = np.zeros(self.shape[1])
        np.add.at(out, self.cols, self.vals * x[self.rows])
        return out

    def expectation(self, x: np.ndarray, y: np.ndarray) -> float:
        return float(np.sum(self.vals * x[self.rows] * y[self.cols]))

    def to_text(self) -> str:
        lines = [f"payoff {self.shape[0]} {self.shape[1]} {self.vals.size}"]
        for xi, yi, v in zip(self.rows, self.cols, self.vals):
            lines.append("%d %d %.17g" % (xi, yi, v))
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "SparsePayoff":
        lines = [ln for ln in text.splitlines() if ln.strip()]
        head = lines[0].split()
        if head[0] != "payoff" or len(head) != 4:
            raise InvalidInput("expected 'payoff NX NY NNZ' header")
        n_x, n_y, nnz = int(head[1]), int(head[2]), int(head[3])
        entries = []
        for ln in lines[1 : 1 + nnz]:
            xi, yi, v = ln.split()
            entries.append((int(xi), int(yi), float(v)))
        return cls(n_x, n_y, entries)


def efg_exploitability(
    payoff: SparsePayoff,
    treeplex_x: Treeplex,
    treeplex_y: Treeplex,
    x: SequenceFormStrategy,
    y: SequenceFormStrategy,
) -> float:
    """max_y' x'Gy' - min_x' x''Gy via one best response per side."""
    if payoff.shape != (treeplex_x.seq_count, treeplex_y.seq_count):
        raise DimensionError(
            f"payoff shape {payoff.shape} vs treeplexes "
            f"({treeplex_x.seq_count},{treeplex_y.seq_count})"
        )
    f = payoff.loss_x(y.values)
    g = payoff.gain_y(x.values)
    min_x, _ = best_response(treeplex_x, f)
    neg_max_y, _ = best_response(treeplex_y, -g)
    return -neg_max_y - min_x
