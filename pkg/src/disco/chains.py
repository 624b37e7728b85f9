"""The eps-chain calculus.

A chain is a tuple of point indices whose consecutive distances are strictly
below the scale eps.  A homotopy is a checked sequence of basic moves (insert
or remove one point) between chains with fixed endpoints; homotopies are
first-class certificates and every constructive operation here returns one.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .errors import (
    EndpointMismatch,
    LengthBudgetExceeded,
    NoMidpointWithinTolerance,
    NotALoop,
    NotAnEpsilonChain,
    PreconditionViolated,
    SizeMismatch,
)
from .metric import approx_midpoint

Chain = tuple  # tuple of point indices


def as_chain(points) -> Chain:
    c = tuple(int(p) for p in points)
    if not c:
        raise NotAnEpsilonChain(0, 0.0, 0.0)
    return c


def length(chain, space) -> float:
    """Sum of consecutive distances; 0 for a singleton."""
    return float(sum(space.dist[chain[k], chain[k + 1]]
                     for k in range(len(chain) - 1)))


def size(chain) -> int:
    """Number of steps (points minus one)."""
    return len(chain) - 1


def is_loop(chain) -> bool:
    return chain[0] == chain[-1]


def first_violation(chain, space, eps):
    """Index of the first gap not strictly below eps, or None."""
    for k in range(len(chain) - 1):
        if not space.dist[chain[k], chain[k + 1]] < eps:
            return k
    return None


def is_eps_chain(chain, space, eps) -> bool:
    return first_violation(chain, space, eps) is None


def check_eps_chain(chain, space, eps):
    k = first_violation(chain, space, eps)
    if k is not None:
        raise NotAnEpsilonChain(k, float(space.dist[chain[k], chain[k + 1]]), eps)


def excess(chain, space, eps) -> float:
    """Minimum slack eps - d over consecutive pairs; +inf for a singleton."""
    check_eps_chain(chain, space, eps)
    if len(chain) == 1:
        return math.inf
    return float(min(eps - space.dist[chain[k], chain[k + 1]]
                     for k in range(len(chain) - 1)))


def deviation(alpha, beta, space) -> float:
    """Max pointwise distance between equal-size chains."""
    if len(alpha) != len(beta):
        raise SizeMismatch(size(alpha), size(beta))
    return float(max(space.dist[a, b] for a, b in zip(alpha, beta)))


def concat(alpha, beta) -> Chain:
    if alpha[-1] != beta[0]:
        raise EndpointMismatch(f"{alpha[-1]} != {beta[0]}")
    return tuple(alpha) + tuple(beta[1:])


def reverse(alpha) -> Chain:
    return tuple(reversed(alpha))


# ------------------------------------------------------------------ homotopies

@dataclass(frozen=True)
class Move:
    op: str            # "ins" | "del"
    pos: int           # index of the inserted point / point to delete
    point: int | None = None

    def to_json(self):
        if self.op == "ins":
            return {"op": "ins", "pos": self.pos, "point": self.point}
        return {"op": "del", "pos": self.pos}


def ins(pos, point) -> Move:
    return Move("ins", int(pos), int(point))


def rem(pos) -> Move:
    return Move("del", int(pos))


@dataclass(frozen=True)
class Homotopy:
    start: Chain
    scale: float
    moves: tuple[Move, ...]

    def to_json(self):
        return {"start": list(self.start), "scale": self.scale,
                "moves": [m.to_json() for m in self.moves]}

    @staticmethod
    def from_json(obj) -> "Homotopy":
        moves = tuple(
            ins(m["pos"], m["point"]) if m["op"] == "ins" else rem(m["pos"])
            for m in obj["moves"])
        return Homotopy(tuple(obj["start"]), float(obj["scale"]), moves)


def apply_move(chain, move):
    """Apply a basic move without validity checks; raises on bad positions.

    Endpoint positions are only touched when the move duplicates (or removes a
    duplicate of) the endpoint value, so first/last values never change.
    """
    m = len(chain)
    if move.op == "ins":
        p = move.pos
        if p < 0 or p > m:
            raise IndexError(f"insert position {p} out of range")
        if p == 0 and move.point != chain[0]:
            raise EndpointMismatch("insert before the first point must duplicate it")
        if p == m and move.point != chain[-1]:
            raise EndpointMismatch("insert after the last point must duplicate it")
        return chain[:p] + (move.point,) + chain[p:]
    p = move.pos
    if p < 0 or p >= m or m == 1:
        raise IndexError(f"delete position {p} out of range")
    if p == 0 and chain[1] != chain[0]:
        raise EndpointMismatch("cannot delete a non-duplicated first point")
    if p == m - 1 and chain[m - 2] != chain[m - 1]:
        raise EndpointMismatch("cannot delete a non-duplicated last point")
    return chain[:p] + chain[p + 1:]


@dataclass(frozen=True)
class VerifyResult:
    ok: bool
    failed_move: int | None = None
    reason: str = ""

    def __bool__(self):
        return self.ok


def verify_homotopy(h: Homotopy, space) -> VerifyResult:
    """Check that every intermediate chain is an eps-chain with fixed endpoints."""
    chain = tuple(h.start)
    if not chain:
        return VerifyResult(False, None, "empty start chain")
    k = first_violation(chain, space, h.scale)
    if k is not None:
        return VerifyResult(False, None, f"start chain gap at {k}")
    first, last = chain[0], chain[-1]
    for idx, move in enumerate(h.moves):
        try:
            chain = apply_move(chain, move)
        except (IndexError, EndpointMismatch) as e:
            return VerifyResult(False, idx, str(e))
        if chain[0] != first or chain[-1] != last:
            return VerifyResult(False, idx, "endpoints moved")
        if move.op == "ins":
            p = move.pos
            bad = None
            if p > 0 and not space.dist[chain[p - 1], chain[p]] < h.scale:
                bad = p - 1
            elif p < len(chain) - 1 and not space.dist[chain[p], chain[p + 1]] < h.scale:
                bad = p
        else:
            p = move.pos
            bad = None
            if 0 < p < len(chain) and not space.dist[chain[p - 1], chain[p]] < h.scale:
                bad = p - 1
        if bad is not None:
            return VerifyResult(
                False, idx,
                f"gap {float(space.dist[chain[bad], chain[bad + 1]]):g} at "
                f"position {bad} not < {h.scale:g}")
    return VerifyResult(True)


def final_chain(h: Homotopy) -> Chain:
    chain = tuple(h.start)
    for move in h.moves:
        chain = apply_move(chain, move)
    return chain


def compose(h1: Homotopy, h2: Homotopy) -> Homotopy:
    """Concatenate two certificates; h2 must start where h1 ends."""
    if h1.scale != h2.scale or final_chain(h1) != tuple(h2.start):
        raise EndpointMismatch("certificates do not compose")
    return Homotopy(h1.start, h1.scale, h1.moves + h2.moves)


# ----------------------------------------------------------- constructive ops

def close_homotopy(alpha, beta, space, eps) -> Homotopy:
    """Deform alpha into a pointwise-close chain beta of the same size.

    Requires shared endpoints and pointwise deviation strictly below half the
    slack of alpha.  Each differing interior point is exchanged by the
    insert-duplicate / insert-new / remove / remove pattern, which stays an
    eps-chain exactly because of that deviation bound.
    """
    alpha, beta = as_chain(alpha), as_chain(beta)
    if len(alpha) != len(beta):
        raise SizeMismatch(size(alpha), size(beta))
    if alpha[0] != beta[0] or alpha[-1] != beta[-1]:
        raise EndpointMismatch("close_homotopy needs shared endpoints")
    slack_half = excess(alpha, space, eps) / 2.0
    delta = deviation(alpha, beta, space)
    if not delta < slack_half:
        raise PreconditionViolated(delta, slack_half)
    moves = []
    for i in range(1, len(alpha) - 1):
        if alpha[i] == beta[i]:
            continue
        moves.append(ins(i + 1, alpha[i]))   # duplicate x_i
        moves.append(ins(i + 1, beta[i]))    # slide y_i between the copies
        moves.append(rem(i))                 # drop the left x_i
        moves.append(rem(i + 1))             # drop the right x_i
    return Homotopy(alpha, eps, tuple(moves))


def normalize(chain, space, eps, L) -> tuple[Chain, Homotopy]:
    """Canonical-size representative of the class: size exactly floor(2L/eps + 1).

    Removes interior points whose two adjacent gaps sum below eps (leftmost
    first), then pads by repeating the start point.  Length never increases.
    """
    chain = as_chain(chain)
    check_eps_chain(chain, space, eps)
    ell = length(chain, space)
    if ell > L * (1 + 1e-12) + 1e-12:
        raise LengthBudgetExceeded(ell, L)
    target = math.floor(2 * L / eps + 1 + 1e-12)
    moves = []
    cur = chain
    changed = True
    while changed and len(cur) > 2:
        changed = False
        for i in range(1, len(cur) - 1):
            if (space.dist[cur[i - 1], cur[i]] + space.dist[cur[i], cur[i + 1]]
                    < eps):
                moves.append(rem(i))
                cur = cur[:i] + cur[i + 1:]
                changed = True
                break
    while size(cur) > target:
        # only possible when padding is impossible anyway; the pairing bound
        # guarantees this never triggers for a valid precondition
        raise LengthBudgetExceeded(length(cur, space), L)
    while size(cur) < target:
        moves.append(ins(1, cur[0]))
        cur = cur[:1] + (cur[0],) + cur[1:]
    return cur, Homotopy(chain, eps, tuple(moves))


def midpoint_refine(chain, space, eps, tol) -> tuple[Chain, Homotopy, float]:
    """Insert an approximate midpoint in every consecutive gap.

    Returns (refined chain, insertion certificate, max midpoint deviation);
    the result is an (eps/2 + deviation)-chain in the same eps-class.
    """
    chain = as_chain(chain)
    check_eps_chain(chain, space, eps)
    moves = []
    cur = list(chain)
    worst = 0.0
    pos = 0
    while pos < len(cur) - 1:
        i, j = cur[pos], cur[pos + 1]
        m, dev = approx_midpoint(space, i, j, tol)
        worst = max(worst, dev)
        moves.append(ins(pos + 1, m))
        cur.insert(pos + 1, m)
        pos += 2
    return tuple(cur), Homotopy(chain, eps, tuple(moves)), worst


@dataclass(frozen=True)
class RotateResult:
    rotated: Chain
    conjugator: Chain          # chain from the old basepoint to the new one
    certificate: Homotopy      # start loop -> conjugator * rotated * reversed


def rotate(loop, space, eps, shift: int) -> RotateResult:
    """Cyclic shift of a loop with an explicit free-homotopy witness.

    The certificate deforms the loop into eta * rotated * reverse(eta) with
    eta the initial segment up to the shift, using only insertions.
    """
    loop = as_chain(loop)
    if not is_loop(loop):
        raise NotALoop("rotate needs a closed chain")
    check_eps_chain(loop, space, eps)
    n = size(loop)
    if n == 0:
        return RotateResult(loop, loop[:1], Homotopy(loop, eps, ()))
    s = shift % n
    if s == 0:
        return RotateResult(loop, loop[:1], Homotopy(loop, eps, ()))
    body = loop[:-1]
    rotated = body[s:] + body[:s] + (body[s],)
    eta = loop[:s + 1]
    moves = [ins(n, loop[0])]
    for k in range(1, s + 1):
        moves.append(ins(n + k, loop[k]))
        if k < s:
            moves.append(ins(n + k + 1, loop[k]))
    return RotateResult(rotated, eta, Homotopy(loop, eps, tuple(moves)))
