"""Pure numpy implementations of the hot loops.

These define the reference semantics; the compiled ``_ckernels`` module
must agree with them to rounding.
"""
import numpy as np


def power_sums(logg, logg1, weight, ks, ls, shifts):
    """out[m] = sum_j weight[j] * exp(ls[m] logg[j] + ks[m] logg1[j] - shifts[m])."""
    out = np.empty(len(ks), dtype=complex)
    for m in range(len(ks)):
        out[m] = np.exp(ls[m] * logg + ks[m] * logg1 - shifts[m]) @ weight
    return out


def transfer_step(vec, n_out, opt_bit, opt_w, keep, retire_mask):
    """One white vertex of the matching transfer.

    ``vec`` is indexed by frontier states before the step.  Each option
    sets one black bit (it must be clear); afterwards every bit in
    ``retire_mask`` must be set, and the surviving bits ``keep`` are packed
    into the new state.
    """
    states = np.arange(len(vec), dtype=np.int64)
    live = vec != 0
    states = states[live]
    vals = vec[live]
    out = np.zeros(1 << n_out, dtype=float)
    for bit, w in zip(opt_bit, opt_w):
        b = np.int64(1) << int(bit)
        ok = (states & b) == 0
        s2 = states[ok] | b
        ok2 = (s2 & retire_mask) == retire_mask
        s2 = s2[ok2]
        t = np.zeros(len(s2), dtype=np.int64)
        for i, kb in enumerate(keep):
            t |= ((s2 >> int(kb)) & 1) << i
        np.add.at(out, t, vals[ok][ok2] * w)
    return out
