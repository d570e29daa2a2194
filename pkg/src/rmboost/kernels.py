"""Hot numeric kernels, written once in an njit-compatible numpy style.

Every kernel here can run in two ways: compiled by numba in nopython mode,
or executed directly by CPython on numpy arrays.  ``get_kernels(use_numba)``
returns a binding table for either path; the default path follows
:mod:`rmboost.accel`.

Kernels:

* ``stump_scan``      - best weighted classification stump over all features,
                        midpoint thresholds, and both polarities.
* ``reg_stump_scan``  - best weighted least-squares regression stump.
* ``simplex_solve``   - bounded-variable primal simplex over the master
                        problem's column set, with a working-basis inverse
                        sized by the number of active rows rather than by the
                        sample count.

The simplex operates on the standard-form problem

    min  c_plus . mu_plus + c_minus . mu_minus
    s.t. U mu_plus - U mu_minus - s = -1/2,   0 <= s <= 1,  mu_± >= 0

whose all-slack basis (mu = 0, s = 1/2) is always feasible.  Variable ids:
``j < t`` is mu_plus[j] (column +U[:, j]), ``t <= j < 2t`` is mu_minus[j - t]
(column -U[:, j - t]), and ``2t + i`` is the slack of row ``i``.  Row states:
0 = slack basic, 1 = slack nonbasic at 0 (margin -1/2), 2 = slack nonbasic
at 1 (margin +1/2).
"""

from __future__ import annotations

import numpy as np

from . import accel

# Row-state codes shared with the linprog wrapper.
ROW_SLACK_BASIC = 0
ROW_AT_LOWER = 1
ROW_AT_UPPER = 2

# simplex_solve status codes.
STATUS_OPTIMAL = 0
STATUS_ITERATION_LIMIT = 1
STATUS_UNBOUNDED = 2
STATUS_SINGULAR = 3

_HUGE_ID = np.int64(1) << np.int64(62)


def _stump_scan_impl(xsort, order, g):
    """Best stump maximizing sum_i g_i * s(x_i) over the full stump family.

    xsort : (n, d) feature values sorted per column (F-ordered).
    order : (n, d) int64 sort permutation per column (F-ordered).
    g     : (n,) per-sample signed weights (w_i * ytil_i).

    Returns (feature, threshold, polarity, score).  Candidate thresholds per
    feature are the midpoints of consecutive distinct sorted values plus one
    threshold below the feature minimum; ties break toward the lowest
    feature, then the lowest threshold, then polarity +1.
    """
    n, d = xsort.shape
    best_score = -1.0
    best_feat = -1
    best_thr = 0.0
    best_pol = 1
    for f in range(d):
        xs = xsort[:, f]
        gs = g[order[:, f]]
        c = np.cumsum(gs)
        total = c[n - 1]
        # sp[k] = signed score of the +1-polarity stump with k samples on
        # the left side (x <= threshold): total - 2 * (left-side mass).
        sp = np.empty(n)
        sp[0] = total
        sp[1:] = total - 2.0 * c[: n - 1]
        av = np.abs(sp)
        invalid = np.empty(n, np.bool_)
        invalid[0] = False
        invalid[1:] = xs[: n - 1] >= xs[1:]
        av[invalid] = -1.0
        k = int(np.argmax(av))
        sc = av[k]
        if sc > best_score:
            best_score = sc
            best_feat = f
            if k == 0:
                best_thr = xs[0] - 1.0
            else:
                best_thr = 0.5 * (xs[k - 1] + xs[k])
            best_pol = 1 if sp[k] >= 0.0 else -1
    return best_feat, best_thr, best_pol, best_score


def _reg_stump_scan_impl(xsort, order, w, z):
    """Best weighted least-squares regression stump for targets z.

    Returns (feature, threshold, left_value, right_value, gain); feature is
    -1 when no split beats the single weighted-mean constant, in which case
    left_value == right_value is that mean.  gain is the explained weighted
    sum of squares sum(w z^2) - SSE.
    """
    n, d = xsort.shape
    wz = w * z
    # Sequential totals (cumsum) keep the two execution paths bit-identical;
    # reduction order would otherwise differ between them.
    tw = np.cumsum(w)[n - 1]
    twz = np.cumsum(wz)[n - 1]
    base_mean = twz / tw
    base_gain = twz * twz / tw
    best_gain = base_gain
    best_feat = -1
    best_thr = 0.0
    best_left = base_mean
    best_right = base_mean
    if n < 2:
        return best_feat, best_thr, best_left, best_right, best_gain
    for f in range(d):
        xs = xsort[:, f]
        idx = order[:, f]
        cw = np.cumsum(w[idx])
        cwz = np.cumsum(wz[idx])
        lw = cw[: n - 1]
        lz = cwz[: n - 1]
        rw = tw - lw
        rz = twz - lz
        gains = lz * lz / np.maximum(lw, 1e-300) + rz * rz / np.maximum(rw, 1e-300)
        invalid = xs[: n - 1] >= xs[1:]
        gains[invalid] = -np.inf
        k = int(np.argmax(gains))
        gn = gains[k]
        if gn > best_gain:
            best_gain = gn
            best_feat = f
            best_thr = 0.5 * (xs[k] + xs[k + 1])
            best_left = lz[k] / lw[k]
            best_right = rz[k] / rw[k]
    return best_feat, best_thr, best_left, best_right, best_gain


def _simplex_solve_impl(U, q, lam, bcols0, brows0, rstate0, start_bland,
                        tol, pivtol, degtol, max_pivots, bland_after,
                        refactor_every):
    """Primal simplex with bounded slacks and a working-basis inverse.

    U        : (n, t) column matrix, entries in [-1, 1].
    q        : (t,) per-column label correlations (U^T y / n).
    lam      : regularization weight, > 0.
    bcols0   : int64 ids of basic structural variables (warm start; empty
               for a cold start from the all-slack basis).
    brows0   : int64 ids of active rows, aligned with the working basis.
    rstate0  : (n,) int8 row states.
    start_bland : nonzero forces Bland's rule from the first pivot.
    tol      : dual feasibility tolerance.
    pivtol   : minimum acceptable pivot magnitude.
    degtol   : step sizes at or below this count as degenerate.
    max_pivots, bland_after, refactor_every : iteration controls.

    Returns (status, pivots, bcols, brows, rstate, xJ, Winv, s).
    """
    n, t = U.shape
    two_t = 2 * t
    cost = np.empty(two_t)
    cost[:t] = lam - q
    cost[t:] = lam + q

    bcols = bcols0.copy()
    brows = brows0.copy()
    rstate = rstate0.copy()
    k = bcols.shape[0]

    struct_basic = np.zeros(two_t, np.bool_)
    for c in range(k):
        struct_basic[bcols[c]] = True

    AJ = np.empty((n, k))
    for c in range(k):
        e = bcols[c]
        if e < t:
            AJ[:, c] = U[:, e]
        else:
            AJ[:, c] = -U[:, e - t]

    Winv = np.empty((0, 0))
    GJ = np.empty((0, 0))
    xJ = np.empty(0)
    s = np.full(n, 0.5)
    need_refactor = k > 0

    status = STATUS_ITERATION_LIMIT
    pivots = 0
    degen_streak = 0
    bland = start_bland != 0
    since_refactor = 0

    while pivots < max_pivots:
        if need_refactor and k > 0:
            W = np.empty((k, k))
            for r in range(k):
                W[r, :] = AJ[brows[r], :]
            # Gauss-Jordan inverse with partial pivoting.  Row operations
            # are elementwise, so both execution paths produce identical
            # bits, unlike a library inverse whose blocked reductions vary
            # between linear-algebra backends.
            GJ = np.zeros((k, 2 * k))
            GJ[:, :k] = W
            for r in range(k):
                GJ[r, k + r] = 1.0
            singular = False
            for col in range(k):
                piv_r = col
                piv_a = abs(GJ[col, col])
                for r in range(col + 1, k):
                    v = abs(GJ[r, col])
                    if v > piv_a:
                        piv_a = v
                        piv_r = r
                if piv_a == 0.0:
                    singular = True
                    break
                if piv_r != col:
                    tmp = GJ[col].copy()
                    GJ[col] = GJ[piv_r]
                    GJ[piv_r] = tmp
                GJ[col] = GJ[col] / GJ[col, col]
                fac = GJ[:, col].copy()
                fac[col] = 0.0
                GJ -= fac.reshape(k, 1) * GJ[col].reshape(1, 2 * k)
            if singular:
                status = STATUS_SINGULAR
                break
            Winv = np.ascontiguousarray(GJ[:, k:])
            rhs = np.empty(k)
            for r in range(k):
                rhs[r] = 0.5 if rstate[brows[r]] == ROW_AT_UPPER else -0.5
            xJ = np.dot(Winv, rhs)
            s = np.dot(AJ, xJ) + 0.5
            for r in range(k):
                s[brows[r]] = 1.0 if rstate[brows[r]] == ROW_AT_UPPER else 0.0
            need_refactor = False
            since_refactor = 0

        # ---- duals and reduced costs ----
        pi_full = np.zeros(n)
        p = q.copy()
        if k > 0:
            cJ = np.empty(k)
            for c in range(k):
                cJ[c] = cost[bcols[c]]
            piN = np.dot(cJ, Winv)
            for r in range(k):
                pi_full[brows[r]] = piN[r]
            UN = np.empty((k, t))
            for r in range(k):
                UN[r, :] = U[brows[r], :]
            p += np.dot(piN, UN)
        dall = np.empty(two_t)
        dall[:t] = lam - p
        dall[t:] = lam + p
        for j in range(two_t):
            if struct_basic[j]:
                dall[j] = np.inf
        deff = np.empty(n)
        for i in range(n):
            if rstate[i] == ROW_AT_LOWER:
                deff[i] = pi_full[i]
            elif rstate[i] == ROW_AT_UPPER:
                deff[i] = -pi_full[i]
            else:
                deff[i] = np.inf

        # ---- entering variable ----
        enter_id = np.int64(-1)
        if bland:
            for j in range(two_t):
                if dall[j] < -tol:
                    enter_id = np.int64(j)
                    break
            if enter_id < 0:
                for i in range(n):
                    if deff[i] < -tol:
                        enter_id = np.int64(two_t + i)
                        break
            if enter_id < 0:
                status = STATUS_OPTIMAL
                break
        else:
            j1 = int(np.argmin(dall))
            v1 = dall[j1]
            j2 = int(np.argmin(deff))
            v2 = deff[j2]
            if v1 <= v2:
                enter_id = np.int64(j1)
                vbest = v1
            else:
                enter_id = np.int64(two_t + j2)
                vbest = v2
            if vbest >= -tol:
                status = STATUS_OPTIMAL
                break

        # ---- entering column and direction ----
        if enter_id < two_t:
            if enter_id < t:
                a_e = U[:, enter_id].copy()
            else:
                a_e = -U[:, enter_id - t]
            sigma = 1.0
            self_range = np.inf
        else:
            r_ent = int(enter_id - two_t)
            a_e = np.zeros(n)
            a_e[r_ent] = -1.0
            sigma = 1.0 if rstate[r_ent] == ROW_AT_LOWER else -1.0
            self_range = 1.0

        if k > 0:
            aN = np.empty(k)
            for r in range(k):
                aN[r] = a_e[brows[r]]
            gJ = np.dot(Winv, aN)
            gfull = np.dot(AJ, gJ) - a_e
        else:
            gJ = np.empty(0)
            gfull = -a_e

        # ---- ratio test ----
        dirJ = sigma * gJ
        dirS = sigma * gfull
        ratJ = np.full(k, np.inf)
        if k > 0:
            xcl = np.maximum(xJ, 0.0)
            mJ = dirJ > pivtol
            ratJ[mJ] = xcl[mJ] / dirJ[mJ]
        scl = np.minimum(np.maximum(s, 0.0), 1.0)
        sb = rstate == ROW_SLACK_BASIC
        mlow = sb & (dirS > pivtol)
        mup = sb & (dirS < -pivtol)
        ratS = np.full(n, np.inf)
        ratS[mlow] = scl[mlow] / dirS[mlow]
        ratS[mup] = (scl[mup] - 1.0) / dirS[mup]

        delta = self_range
        if k > 0:
            delta = min(delta, ratJ.min())
        delta = min(delta, ratS.min())
        if delta == np.inf:
            status = STATUS_UNBOUNDED
            break

        # ---- leaving variable among minimal-ratio candidates ----
        thresh = delta + 1e-9 * delta + 1e-15
        leave_kind = -2  # -1 self bound flip, 0 structural, 1 slack
        leave_pos = -1
        best_id = _HUGE_ID
        if bland:
            if k > 0:
                okJ = ratJ <= thresh
                if okJ.any():
                    positions = np.nonzero(okJ)[0]
                    sel = positions[int(np.argmin(bcols[positions]))]
                    best_id = bcols[sel]
                    leave_kind = 0
                    leave_pos = int(sel)
            okS = ratS <= thresh
            if okS.any():
                i0 = np.nonzero(okS)[0][0]
                if np.int64(two_t + i0) < best_id:
                    best_id = np.int64(two_t + i0)
                    leave_kind = 1
                    leave_pos = int(i0)
            if self_range <= thresh and enter_id < best_id:
                leave_kind = -1
        else:
            pvJ = np.full(k, -1.0)
            if k > 0:
                okJ = ratJ <= thresh
                pvJ[okJ] = np.abs(dirJ[okJ])
            okS = ratS <= thresh
            pvS = np.full(n, -1.0)
            pvS[okS] = np.abs(dirS[okS])
            pself = 1.0 if self_range <= thresh else -1.0
            mx = pself
            if k > 0:
                mx = max(mx, pvJ.max())
            mx = max(mx, pvS.max())
            if k > 0:
                eqJ = pvJ == mx
                if eqJ.any():
                    positions = np.nonzero(eqJ)[0]
                    sel = positions[int(np.argmin(bcols[positions]))]
                    best_id = bcols[sel]
                    leave_kind = 0
                    leave_pos = int(sel)
            eqS = pvS == mx
            if eqS.any():
                i0 = np.nonzero(eqS)[0][0]
                if np.int64(two_t + i0) < best_id:
                    best_id = np.int64(two_t + i0)
                    leave_kind = 1
                    leave_pos = int(i0)
            if pself == mx and enter_id < best_id:
                leave_kind = -1

        # ---- apply the step ----
        if k > 0:
            xJ = xJ - delta * dirJ
            s[sb] = s[sb] - delta * dirS[sb]
        else:
            s[sb] = s[sb] - delta * dirS[sb]

        if leave_kind == -1:
            # Bound flip of the entering slack; basis unchanged.
            r_ent = int(enter_id - two_t)
            if rstate[r_ent] == ROW_AT_LOWER:
                rstate[r_ent] = ROW_AT_UPPER
                s[r_ent] = 1.0
            else:
                rstate[r_ent] = ROW_AT_LOWER
                s[r_ent] = 0.0
        elif leave_kind == 0:
            c_l = leave_pos
            if enter_id < two_t:
                # Structural replaces structural: rank-1 column update.
                piv = gJ[c_l]
                struct_basic[bcols[c_l]] = False
                struct_basic[enter_id] = True
                bcols[c_l] = enter_id
                xJ[c_l] = delta
                AJ[:, c_l] = a_e
                wrow = Winv[c_l, :] / piv
                Winv = Winv - gJ.reshape(k, 1) * wrow.reshape(1, k)
                Winv[c_l, :] = wrow
            else:
                # Slack enters, structural leaves: basis shrinks by one.
                r_ent = int(enter_id - two_t)
                posN = -1
                for r in range(k):
                    if brows[r] == r_ent:
                        posN = r
                        break
                piv = Winv[c_l, posN]
                idxJ = np.concatenate((np.arange(c_l), np.arange(c_l + 1, k)))
                idxN = np.concatenate((np.arange(posN), np.arange(posN + 1, k)))
                colv = Winv[idxJ, posN]
                roww = Winv[c_l, idxN]
                sub = Winv[idxJ, :][:, idxN]
                Winv = sub - colv.reshape(k - 1, 1) * roww.reshape(1, k - 1) / piv
                struct_basic[bcols[c_l]] = False
                bcols_new = np.empty(k - 1, np.int64)
                bcols_new[:c_l] = bcols[:c_l]
                bcols_new[c_l:] = bcols[c_l + 1:]
                bcols = bcols_new
                xJ_new = np.empty(k - 1)
                xJ_new[:c_l] = xJ[:c_l]
                xJ_new[c_l:] = xJ[c_l + 1:]
                xJ = xJ_new
                AJ_new = np.empty((n, k - 1))
                AJ_new[:, :c_l] = AJ[:, :c_l]
                AJ_new[:, c_l:] = AJ[:, c_l + 1:]
                AJ = AJ_new
                brows_new = np.empty(k - 1, np.int64)
                brows_new[:posN] = brows[:posN]
                brows_new[posN:] = brows[posN + 1:]
                brows = brows_new
                rstate[r_ent] = ROW_SLACK_BASIC
                s[r_ent] = (0.0 if sigma > 0.0 else 1.0) + sigma * delta
                k -= 1
        else:
            i_l = leave_pos
            hit_low = dirS[i_l] > 0.0
            if enter_id < two_t:
                # Structural enters, slack leaves: basis grows by one.
                if k > 0:
                    vrow = AJ[i_l, :].copy()
                    schur = a_e[i_l] - np.dot(vrow, gJ)
                    vW = np.dot(vrow, Winv)
                    Winv_new = np.empty((k + 1, k + 1))
                    Winv_new[:k, :k] = Winv + gJ.reshape(k, 1) * vW.reshape(1, k) / schur
                    Winv_new[:k, k] = -gJ / schur
                    Winv_new[k, :k] = -vW / schur
                    Winv_new[k, k] = 1.0 / schur
                    Winv = Winv_new
                else:
                    schur = a_e[i_l]
                    Winv = np.empty((1, 1))
                    Winv[0, 0] = 1.0 / schur
                bcols_new = np.empty(k + 1, np.int64)
                bcols_new[:k] = bcols
                bcols_new[k] = enter_id
                bcols = bcols_new
                struct_basic[enter_id] = True
                xJ_new = np.empty(k + 1)
                xJ_new[:k] = xJ
                xJ_new[k] = delta
                xJ = xJ_new
                AJ_new = np.empty((n, k + 1))
                AJ_new[:, :k] = AJ
                AJ_new[:, k] = a_e
                AJ = AJ_new
                brows_new = np.empty(k + 1, np.int64)
                brows_new[:k] = brows
                brows_new[k] = i_l
                brows = brows_new
                rstate[i_l] = ROW_AT_LOWER if hit_low else ROW_AT_UPPER
                s[i_l] = 0.0 if hit_low else 1.0
                k += 1
            else:
                # Slack enters, another slack leaves: active-row swap.
                r_ent = int(enter_id - two_t)
                posN = -1
                for r in range(k):
                    if brows[r] == r_ent:
                        posN = r
                        break
                vrow = AJ[i_l, :].copy()
                z = np.dot(vrow, Winv)
                piv = z[posN]
                wcol = Winv[:, posN] / piv
                Winv = Winv - wcol.reshape(k, 1) * z.reshape(1, k)
                Winv[:, posN] = wcol
                brows[posN] = i_l
                rstate[i_l] = ROW_AT_LOWER if hit_low else ROW_AT_UPPER
                s[i_l] = 0.0 if hit_low else 1.0
                rstate[r_ent] = ROW_SLACK_BASIC
                s[r_ent] = (0.0 if sigma > 0.0 else 1.0) + sigma * delta

        pivots += 1
        since_refactor += 1
        if delta <= degtol:
            degen_streak += 1
            if degen_streak >= bland_after:
                bland = True
        else:
            degen_streak = 0
        if since_refactor >= refactor_every:
            need_refactor = True

    if status == STATUS_OPTIMAL and k > 0:
        # Final clean recomputation of the returned state.
        W = np.empty((k, k))
        for r in range(k):
            W[r, :] = AJ[brows[r], :]
        GJ = np.zeros((k, 2 * k))
        GJ[:, :k] = W
        for r in range(k):
            GJ[r, k + r] = 1.0
        for col in range(k):
            piv_r = col
            piv_a = abs(GJ[col, col])
            for r in range(col + 1, k):
                v = abs(GJ[r, col])
                if v > piv_a:
                    piv_a = v
                    piv_r = r
            if piv_a == 0.0:
                status = STATUS_SINGULAR
                break
            if piv_r != col:
                tmp = GJ[col].copy()
                GJ[col] = GJ[piv_r]
                GJ[piv_r] = tmp
            GJ[col] = GJ[col] / GJ[col, col]
            fac = GJ[:, col].copy()
            fac[col] = 0.0
            GJ -= fac.reshape(k, 1) * GJ[col].reshape(1, 2 * k)
    if status == STATUS_OPTIMAL and k > 0:
        Winv = np.ascontiguousarray(GJ[:, k:])
        rhs = np.empty(k)
        for r in range(k):
            rhs[r] = 0.5 if rstate[brows[r]] == ROW_AT_UPPER else -0.5
        xJ = np.dot(Winv, rhs)
        s = np.dot(AJ, xJ) + 0.5
        for r in range(k):
            s[brows[r]] = 1.0 if rstate[brows[r]] == ROW_AT_UPPER else 0.0

    return status, pivots, bcols, brows, rstate, xJ, Winv, s


_IMPLS = (
    ("stump_scan", _stump_scan_impl),
    ("reg_stump_scan", _reg_stump_scan_impl),
    ("simplex_solve", _simplex_solve_impl),
)

_CACHE: dict = {}


def get_kernels(use_numba=None):
    """Binding table name -> callable for the requested execution path.

    use_numba=None follows the package default (accel.NUMBA_ENABLED); True
    forces compilation (requires numba); False returns the pure-numpy
    functions.
    """
    if use_numba is None:
        use_numba = accel.NUMBA_ENABLED
    use_numba = bool(use_numba)
    if use_numba not in _CACHE:
        if use_numba:
            _CACHE[True] = {name: accel.jit_compile(fn) for name, fn in _IMPLS}
        else:
            _CACHE[False] = {name: fn for name, fn in _IMPLS}
    return _CACHE[use_numba]
