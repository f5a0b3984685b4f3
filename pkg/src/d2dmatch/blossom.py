"""Maximum-weight matching on general graphs (Edmonds' blossom method).

Primal-dual algorithm in the O(n^3) formulation of Galil (1986): stages
grow alternating trees from every free vertex over tight edges, shrink odd
cycles into blossoms, and adjust the dual variables when no tight edge can
be used.  Weights are doubled implicitly (``slack = y_i + y_j - 2 w_ij``)
so integral weights stay integral.

The kernel is compiled with numba; all state lives in flat numpy arrays
plus typed lists for the variable-length blossom child sequences.  The
recursive steps of the textbook version (blossom expansion at the end of a
stage and augmentation through nested blossoms) are run off explicit
stacks.

Entry point: :func:`max_weight_matching`.
"""

from __future__ import annotations

import numpy as np
from numba import njit, types
from numba.typed import List

_I64_ARR = types.int64[::1]


@njit(cache=True)
def _slack(k, eu, ev, ew, dual):
    return dual[eu[k]] + dual[ev[k]] - 2.0 * ew[k]


@njit(cache=True)
def _leaves(b, n, childs, out, stack):
    """Write the vertices inside blossom ``b`` to ``out``; return the count."""
    cnt = 0
    if b < n:
        out[0] = b
        return 1
    top = 0
    stack[0] = b
    top = 1
    while top > 0:
        top -= 1
        x = stack[top]
        if x < n:
            out[cnt] = x
            cnt += 1
        else:
            ch = childs[x]
            for i in range(ch.size):
                stack[top] = ch[i]
                top += 1
    return cnt


@njit(cache=True)
def _assign_label(w, t, p, n, endpoint, mate, inblossom, label, labelend, bestedge,
                  blossombase, childs, queue, buf, stk):
    while True:
        b = inblossom[w]
        label[w] = t
        label[b] = t
        labelend[w] = p
        labelend[b] = p
        bestedge[w] = -1
        bestedge[b] = -1
        if t == 1:
            cnt = _leaves(b, n, childs, buf, stk)
            for i in range(cnt):
                queue.append(buf[i])
            return
        base = blossombase[b]
        mb = mate[base]
        w = endpoint[mb]
        t = 1
        p = mb ^ 1


@njit(cache=True)
def _scan_blossom(v, w, endpoint, inblossom, label, labelend, blossombase, path):
    """Trace back from ``v`` and ``w``; return the base of a new blossom or -1
    if the two trees are different (an augmenting path exists)."""
    path.clear()
    base = -1
    while v != -1 or w != -1:
        b = inblossom[v]
        if label[b] & 4:
            base = blossombase[b]
            break
        path.append(b)
        label[b] = 5
        if labelend[b] == -1:
            v = -1
        else:
            v = endpoint[labelend[b]]
            b = inblossom[v]
            v = endpoint[labelend[b]]
        if w != -1:
            tmp = v
            v = w
            w = tmp
    for b in path:
        label[b] = 1
    return base


@njit(cache=True)
def _augment_blossom(b0, v0, n, endpoint, mate, blossomparent, blossombase, childs, endps, work):
    """Swap matched/unmatched edges along the even path from ``v0`` to the
    base of ``b0`` inside the blossom, recursively; ``v0`` becomes the base."""
    work.clear()
    work.append((b0, v0))
    while len(work) > 0:
        b, v = work.pop()
        t = v
        while blossomparent[t] != b:
            t = blossomparent[t]
        if t >= n:
            work.append((t, v))
        ch = childs[b]
        ep = endps[b]
        L = ch.size
        i = 0
        while ch[i] != t:
            i += 1
        j = i
        if i & 1:
            j -= L
            jstep = 1
            endptrick = 0
        else:
            jstep = -1
            endptrick = 1
        while j != 0:
            j += jstep
            t = ch[j % L]
            p = ep[(j - endptrick) % L] ^ endptrick
            if t >= n:
                work.append((t, endpoint[p]))
            j += jstep
            t = ch[j % L]
            if t >= n:
                work.append((t, endpoint[p ^ 1]))
            mate[endpoint[p]] = p ^ 1
            mate[endpoint[p ^ 1]] = p
        childs[b] = np.concatenate((ch[i:], ch[:i]))
        endps[b] = np.concatenate((ep[i:], ep[:i]))
        blossombase[b] = v


@njit(cache=True)
def _mwm_kernel(n, eu, ev, ew, init_mate):
    m = eu.size
    nb2 = 2 * n
    endpoint = np.empty(2 * m, dtype=np.int64)
    for k in range(m):
        endpoint[2 * k] = eu[k]
        endpoint[2 * k + 1] = ev[k]
    # neighbend: endpoints p whose vertex is the far end of an edge at v
    deg = np.zeros(n + 1, dtype=np.int64)
    for k in range(m):
        deg[eu[k] + 1] += 1
        deg[ev[k] + 1] += 1
    nb_start = np.cumsum(deg)
    fill = nb_start[:-1].copy()
    nb_p = np.empty(2 * m, dtype=np.int64)
    for k in range(m):
        nb_p[fill[eu[k]]] = 2 * k + 1
        fill[eu[k]] += 1
        nb_p[fill[ev[k]]] = 2 * k
        fill[ev[k]] += 1

    maxweight = 0.0
    for k in range(m):
        if ew[k] > maxweight:
            maxweight = ew[k]

    mate = init_mate.copy()
    label = np.zeros(nb2, dtype=np.int64)
    labelend = np.full(nb2, -1, dtype=np.int64)
    inblossom = np.arange(n, dtype=np.int64)
    blossomparent = np.full(nb2, -1, dtype=np.int64)
    blossombase = np.full(nb2, -1, dtype=np.int64)
    blossombase[:n] = np.arange(n)
    bestedge = np.full(nb2, -1, dtype=np.int64)
    hasbest = np.zeros(nb2, dtype=np.bool_)
    dual = np.zeros(nb2, dtype=np.float64)
    dual[:n] = maxweight
    allowedge = np.zeros(m, dtype=np.bool_)

    empty = np.empty(0, dtype=np.int64)
    childs = List()
    endps = List()
    bestlists = List()
    for _ in range(nb2):
        childs.append(empty)
        endps.append(empty)
        bestlists.append(empty)
    unused = List()
    for b in range(nb2 - 1, n - 1, -1):
        unused.append(b)

    queue = List()
    queue.append(0)
    queue.clear()
    path = List()
    path.append(0)
    path.clear()
    work = List()
    work.append((0, 0))
    work.clear()
    buf = np.empty(n, dtype=np.int64)
    buf2 = np.empty(n, dtype=np.int64)
    stk = np.empty(nb2 + 1, dtype=np.int64)
    bestedgeto = np.full(nb2, -1, dtype=np.int64)
    expand_stack = np.empty(nb2, dtype=np.int64)

    for _stage in range(n + 1):
        label[:] = 0
        bestedge[:] = -1
        hasbest[n:] = False
        for b in range(n, nb2):
            bestlists[b] = empty
        allowedge[:] = False
        queue.clear()
        for v in range(n):
            if mate[v] == -1 and label[inblossom[v]] == 0:
                _assign_label(v, 1, -1, n, endpoint, mate, inblossom, label, labelend,
                              bestedge, blossombase, childs, queue, buf, stk)
        augmented = False
        while True:
            while len(queue) > 0 and not augmented:
                v = queue.pop()
                for ii in range(nb_start[v], nb_start[v + 1]):
                    p = nb_p[ii]
                    k = p >> 1
                    w = endpoint[p]
                    if inblossom[v] == inblossom[w]:
                        continue
                    kslack = 0.0
                    if not allowedge[k]:
                        kslack = _slack(k, eu, ev, ew, dual)
                        if kslack <= 0.0:
                            allowedge[k] = True
                    if allowedge[k]:
                        if label[inblossom[w]] == 0:
                            _assign_label(w, 2, p ^ 1, n, endpoint, mate, inblossom, label,
                                          labelend, bestedge, blossombase, childs, queue, buf, stk)
                        elif label[inblossom[w]] == 1:
                            base = _scan_blossom(v, w, endpoint, inblossom, label, labelend,
                                                 blossombase, path)
                            if base >= 0:
                                # ---- add blossom ----
                                bb = inblossom[base]
                                bv = inblossom[eu[k]]
                                bw = inblossom[ev[k]]
                                nb = unused.pop()
                                blossombase[nb] = base
                                blossomparent[nb] = -1
                                blossomparent[bb] = nb
                                chl = List()
                                epl = List()
                                while bv != bb:
                                    blossomparent[bv] = nb
                                    chl.append(bv)
                                    epl.append(labelend[bv])
                                    vv = endpoint[labelend[bv]]
                                    bv = inblossom[vv]
                                chl.append(bb)
                                chl.reverse()
                                epl.reverse()
                                epl.append(2 * k)
                                while bw != bb:
                                    blossomparent[bw] = nb
                                    chl.append(bw)
                                    epl.append(labelend[bw] ^ 1)
                                    ww = endpoint[labelend[bw]]
                                    bw = inblossom[ww]
                                ch_arr = np.empty(len(chl), dtype=np.int64)
                                ep_arr = np.empty(len(epl), dtype=np.int64)
                                for q in range(len(chl)):
                                    ch_arr[q] = chl[q]
                                    ep_arr[q] = epl[q]
                                childs[nb] = ch_arr
                                endps[nb] = ep_arr
                                label[nb] = 1
                                labelend[nb] = labelend[bb]
                                dual[nb] = 0.0
                                cnt = _leaves(nb, n, childs, buf, stk)
                                for q in range(cnt):
                                    x = buf[q]
                                    if label[inblossom[x]] == 2:
                                        queue.append(x)
                                    inblossom[x] = nb
                                # best edges towards neighbouring S-blossoms
                                touched = List()
                                touched.append(0)
                                touched.clear()
                                for ci in range(ch_arr.size):
                                    sb = ch_arr[ci]
                                    if hasbest[sb]:
                                        lst = bestlists[sb]
                                        for q in range(lst.size):
                                            kk = lst[q]
                                            i2 = eu[kk]
                                            j2 = ev[kk]
                                            if inblossom[j2] == nb:
                                                j2 = i2
                                            bj = inblossom[j2]
                                            if bj != nb and label[bj] == 1:
                                                if bestedgeto[bj] == -1:
                                                    touched.append(bj)
                                                    bestedgeto[bj] = kk
                                                elif _slack(kk, eu, ev, ew, dual) < _slack(bestedgeto[bj], eu, ev, ew, dual):
                                                    bestedgeto[bj] = kk
                                    else:
                                        cnt2 = _leaves(sb, n, childs, buf2, stk)
                                        for q2 in range(cnt2):
                                            x = buf2[q2]
                                            for jj in range(nb_start[x], nb_start[x + 1]):
                                                kk = nb_p[jj] >> 1
                                                j2 = endpoint[nb_p[jj]]
                                                bj = inblossom[j2]
                                                if bj != nb and label[bj] == 1:
                                                    if bestedgeto[bj] == -1:
                                                        touched.append(bj)
                                                        bestedgeto[bj] = kk
                                                    elif _slack(kk, eu, ev, ew, dual) < _slack(bestedgeto[bj], eu, ev, ew, dual):
                                                        bestedgeto[bj] = kk
                                    hasbest[sb] = False
                                    bestlists[sb] = empty
                                    bestedge[sb] = -1
                                bl = np.empty(len(touched), dtype=np.int64)
                                for q in range(len(touched)):
                                    bl[q] = bestedgeto[touched[q]]
                                    bestedgeto[touched[q]] = -1
                                bl.sort()
                                bestlists[nb] = bl
                                hasbest[nb] = True
                                bestedge[nb] = -1
                                for q in range(bl.size):
                                    kk = bl[q]
                                    if bestedge[nb] == -1 or _slack(kk, eu, ev, ew, dual) < _slack(bestedge[nb], eu, ev, ew, dual):
                                        bestedge[nb] = kk
                            else:
                                # ---- augment along edge k ----
                                for side in range(2):
                                    if side == 0:
                                        s = eu[k]
                                        p2 = 2 * k + 1
                                    else:
                                        s = ev[k]
                                        p2 = 2 * k
                                    while True:
                                        bs = inblossom[s]
                                        if bs >= n:
                                            _augment_blossom(bs, s, n, endpoint, mate, blossomparent,
                                                             blossombase, childs, endps, work)
                                        mate[s] = p2
                                        if labelend[bs] == -1:
                                            break
                                        t = endpoint[labelend[bs]]
                                        bt = inblossom[t]
                                        s = endpoint[labelend[bt]]
                                        jv = endpoint[labelend[bt] ^ 1]
                                        if bt >= n:
                                            _augment_blossom(bt, jv, n, endpoint, mate, blossomparent,
                                                             blossombase, childs, endps, work)
                                        mate[jv] = labelend[bt]
                                        p2 = labelend[bt] ^ 1
                                augmented = True
                                break
                        elif label[w] == 0:
                            label[w] = 2
                            labelend[w] = p ^ 1
                    elif label[inblossom[w]] == 1:
                        b = inblossom[v]
                        if bestedge[b] == -1 or kslack < _slack(bestedge[b], eu, ev, ew, dual):
                            bestedge[b] = k
                    elif label[w] == 0:
                        if bestedge[w] == -1 or kslack < _slack(bestedge[w], eu, ev, ew, dual):
                            bestedge[w] = k
            if augmented:
                break

            # ---- dual adjustment ----
            deltatype = 1
            delta = dual[0]
            for v in range(1, n):
                if dual[v] < delta:
                    delta = dual[v]
            deltaedge = -1
            deltablossom = -1
            for v in range(n):
                if label[inblossom[v]] == 0 and bestedge[v] != -1:
                    d = _slack(bestedge[v], eu, ev, ew, dual)
                    if d < delta:
                        delta = d
                        deltatype = 2
                        deltaedge = bestedge[v]
            for b in range(nb2):
                if blossomparent[b] == -1 and label[b] == 1 and bestedge[b] != -1:
                    d = _slack(bestedge[b], eu, ev, ew, dual) / 2.0
                    if d < delta:
                        delta = d
                        deltatype = 3
                        deltaedge = bestedge[b]
            for b in range(n, nb2):
                if blossombase[b] >= 0 and blossomparent[b] == -1 and label[b] == 2 and dual[b] < delta:
                    delta = dual[b]
                    deltatype = 4
                    deltablossom = b
            for v in range(n):
                lb = label[inblossom[v]]
                if lb == 1:
                    dual[v] -= delta
                elif lb == 2:
                    dual[v] += delta
            for b in range(n, nb2):
                if blossombase[b] >= 0 and blossomparent[b] == -1:
                    if label[b] == 1:
                        dual[b] += delta
                    elif label[b] == 2:
                        dual[b] -= delta
            if deltatype == 1:
                break
            elif deltatype == 2:
                allowedge[deltaedge] = True
                i2 = eu[deltaedge]
                if label[inblossom[i2]] == 0:
                    i2 = ev[deltaedge]
                queue.append(i2)
            elif deltatype == 3:
                allowedge[deltaedge] = True
                queue.append(eu[deltaedge])
            else:
                _expand_blossom(deltablossom, False, n, endpoint, mate, inblossom, label, labelend,
                                bestedge, hasbest, bestlists, blossomparent, blossombase, childs,
                                endps, dual, allowedge, unused, queue, buf, buf2, stk, expand_stack, empty)
        if not augmented:
            break
        for b in range(n, nb2):
            if (blossomparent[b] == -1 and blossombase[b] >= 0 and label[b] == 1
                    and dual[b] == 0.0):
                _expand_blossom(b, True, n, endpoint, mate, inblossom, label, labelend,
                                bestedge, hasbest, bestlists, blossomparent, blossombase, childs,
                                endps, dual, allowedge, unused, queue, buf, buf2, stk, expand_stack, empty)

    out = np.full(n, -1, dtype=np.int64)
    for v in range(n):
        if mate[v] >= 0:
            out[v] = endpoint[mate[v]]
    return out


@njit(cache=True)
def _expand_blossom(b0, endstage, n, endpoint, mate, inblossom, label, labelend, bestedge,
                    hasbest, bestlists, blossomparent, blossombase, childs, endps, dual,
                    allowedge, unused, queue, buf, buf2, stk, expand_stack, empty):
    top = 1
    expand_stack[0] = b0
    while top > 0:
        top -= 1
        b = expand_stack[top]
        ch = childs[b]
        for ci in range(ch.size):
            s = ch[ci]
            blossomparent[s] = -1
            if s < n:
                inblossom[s] = s
            elif endstage and dual[s] == 0.0:
                expand_stack[top] = s
                top += 1
            else:
                cnt = _leaves(s, n, childs, buf, stk)
                for q in range(cnt):
                    inblossom[buf[q]] = s
        if (not endstage) and label[b] == 2:
            # relabel the part of the expanded T-blossom on the alternating tree
            ep = endps[b]
            L = ch.size
            entrychild = inblossom[endpoint[labelend[b] ^ 1]]
            j = 0
            while ch[j] != entrychild:
                j += 1
            if j & 1:
                j -= L
                jstep = 1
                endptrick = 0
            else:
                jstep = -1
                endptrick = 1
            p = labelend[b]
            while j != 0:
                label[endpoint[p ^ 1]] = 0
                label[endpoint[ep[(j - endptrick) % L] ^ endptrick ^ 1]] = 0
                _assign_label(endpoint[p ^ 1], 2, p, n, endpoint, mate, inblossom, label, labelend,
                              bestedge, blossombase, childs, queue, buf, stk)
                allowedge[ep[(j - endptrick) % L] >> 1] = True
                j += jstep
                p = ep[(j - endptrick) % L] ^ endptrick
                allowedge[p >> 1] = True
                j += jstep
            bv = ch[j % L]
            label[endpoint[p ^ 1]] = 2
            label[bv] = 2
            labelend[endpoint[p ^ 1]] = p
            labelend[bv] = p
            bestedge[bv] = -1
            j += jstep
            while ch[j % L] != entrychild:
                bv = ch[j % L]
                if label[bv] == 1:
                    j += jstep
                    continue
                cnt = _leaves(bv, n, childs, buf2, stk)
                found = -1
                for q in range(cnt):
                    if label[buf2[q]] != 0:
                        found = buf2[q]
                        break
                if found >= 0:
                    label[found] = 0
                    label[endpoint[mate[blossombase[bv]]]] = 0
                    _assign_label(found, 2, labelend[found], n, endpoint, mate, inblossom, label,
                                  labelend, bestedge, blossombase, childs, queue, buf, stk)
                j += jstep
        label[b] = -1
        labelend[b] = -1
        childs[b] = empty
        endps[b] = empty
        blossombase[b] = -1
        hasbest[b] = False
        bestlists[b] = empty
        bestedge[b] = -1
        unused.append(b)


def max_weight_matching(n: int, eu, ev, ew, init_edges=None) -> np.ndarray:
    """Maximum-weight (not necessarily perfect) matching.

    ``eu, ev, ew`` describe a simple undirected graph on ``0..n-1`` with
    non-negative weights.  ``init_edges`` may list a partial matching made
    only of edges carrying the maximum weight; it is a valid warm start
    because every vertex dual starts at that maximum, which makes those
    edges tight.  Returns ``mate[v]`` (partner vertex or -1).
    """
    eu = np.ascontiguousarray(eu, dtype=np.int64)
    ev = np.ascontiguousarray(ev, dtype=np.int64)
    ew = np.ascontiguousarray(ew, dtype=np.float64)
    init = np.full(n, -1, dtype=np.int64)
    if n == 0 or eu.size == 0:
        return init
    if init_edges is not None:
        k = np.asarray(init_edges, dtype=np.int64)
        if k.size:
            if np.any(ew[k] != ew.max()):
                raise ValueError("warm start may only use maximum-weight edges")
            init[eu[k]] = 2 * k + 1
            init[ev[k]] = 2 * k
    return _mwm_kernel(int(n), eu, ev, ew, init)
