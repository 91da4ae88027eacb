"""Extrinsic APP messages at generalized constraint nodes.

Soft LLR outputs by codeword enumeration with a permutation fast path for
message-invariant subcodes, plus exact erasure logic for the BEC.
"""

from __future__ import annotations

import numpy as np

from .subcodes import LinearSubcode

LLR_CLIP = 50.0


class InconsistentEvidenceError(ValueError):
    """Hard (+/-inf) inputs exclude every codeword on both branches."""


def _branch_value(k_inf: np.ndarray, finite: np.ndarray) -> tuple[int, float]:
    """(max +inf count, log-sum-exp of finite parts over the argmax set)."""
    top = int(k_inf.max())
    sel = finite[k_inf == top]
    m = sel.max()
    return top, m + np.log(np.exp(sel - m).sum())


def app_message(code: LinearSubcode, target: int, incoming: np.ndarray) -> float:
    """Extrinsic APP LLR for position ``target`` given the other K-1 LLRs.

    ``incoming`` is ordered by the positions j != target. +/-inf inputs are
    handled as exact hard evidence by codeword filtering.
    """
    k = code.length
    incoming = np.asarray(incoming, dtype=float)
    if incoming.shape != (k - 1,):
        raise ValueError(f"expected {k - 1} incoming LLRs, got {incoming.shape}")
    if np.isnan(incoming).any():
        raise ValueError("NaN in incoming LLRs")

    full = np.zeros(k)
    others = [j for j in range(k) if j != target]
    full[others] = incoming

    zero_mask = code.codewords == 0  # indicator of c'_j = 0
    pos_inf = np.isposinf(full)
    neg_inf = np.isneginf(full)
    pos_inf[target] = neg_inf[target] = False
    finite_vals = np.clip(np.where(np.isfinite(full), full, 0.0), -LLR_CLIP, LLR_CLIP)

    # drop codewords whose exponent contains a -inf term
    alive = ~(zero_mask & neg_inf).any(axis=1)
    k_inf = (zero_mask & pos_inf).sum(axis=1)
    finite = zero_mask @ finite_vals

    b0 = alive & (code.codewords[:, target] == 0)
    b1 = alive & (code.codewords[:, target] == 1)
    if not b0.any() and not b1.any():
        raise InconsistentEvidenceError("hard evidence matches no codeword")
    if not b1.any():
        return np.inf
    if not b0.any():
        return -np.inf
    k0, l0 = _branch_value(k_inf[b0], finite[b0])
    k1, l1 = _branch_value(k_inf[b1], finite[b1])
    if k0 != k1:
        return np.inf if k0 > k1 else -np.inf
    return l0 - l1


def app_message_via_permutation(
    code: LinearSubcode, target: int, incoming: np.ndarray
) -> float:
    """APP message through the code's permutation table.

    Permutes the K-slot message vector so the target slot lands on position 0
    and evaluates the position-0 message map once.
    """
    if code.permutations is None:
        raise ValueError(f"subcode {code.name} has no permutation table")
    k = code.length
    incoming = np.asarray(incoming, dtype=float)
    full = np.zeros(k)
    others = [j for j in range(k) if j != target]
    full[others] = incoming
    permuted = full[code.permutations.perms[target]]
    return app_message(code, 0, permuted[1:])


def app_message_batch(code: LinearSubcode, incoming: np.ndarray) -> np.ndarray:
    """Vectorized position-0 APP messages for rows of finite LLRs.

    ``incoming`` has shape (..., K-1), ordered by positions 1..K-1. Inputs are
    clipped to +/-LLR_CLIP; outputs are finite.
    """
    zero_mask = (code.codewords == 0).astype(float)
    expo = np.clip(incoming, -LLR_CLIP, LLR_CLIP) @ zero_mask[:, 1:].T
    b0 = code.codewords[:, 0] == 0
    return _logsumexp(expo[..., b0]) - _logsumexp(expo[..., ~b0])


def _logsumexp(a: np.ndarray) -> np.ndarray:
    m = a.max(axis=-1, keepdims=True)
    return (m + np.log(np.exp(a - m).sum(axis=-1, keepdims=True)))[..., 0]


def app_erasure_output(code: LinearSubcode, target: int, erased: set[int]) -> bool:
    """BEC output erasure indicator: True means the outgoing message is erased.

    With the known positions consistent with all-zero, bit ``target`` is
    undetermined iff some codeword has c'_target = 1 and support inside the
    erased set.
    """
    erased = set(erased)
    if target in erased:
        raise ValueError("target position cannot be in the erased set")
    words = code.codewords
    sel = words[:, target] == 1
    if not sel.any():
        return False
    known = np.asarray(
        [j for j in range(code.length) if j != target and j not in erased], dtype=np.intp
    )
    if known.size == 0:
        return True
    return bool((words[sel][:, known].sum(axis=1) == 0).any())
