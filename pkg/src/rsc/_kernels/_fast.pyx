# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels: keyed hashing, GF(p) column rank, Jacobi eigenvalues.

Must match rsc._kernels.pure bit-for-bit on hash decisions and ranks; see
tests/test_kernels.py for the equivalence suite.
"""

from libc.stdlib cimport free, malloc, realloc

import numpy as np

cimport numpy as cnp


cdef void* realloc_or_die(void* ptr, size_t size) except NULL:
    # on failure the caller's pointer stays valid and its cleanup frees it
    cdef void* out = realloc(ptr, size)
    if out == NULL:
        raise MemoryError()
    return out

BACKEND = "compiled"

cdef extern from *:
    """
    #include <stdint.h>
    static inline uint64_t rsc_mix(uint64_t z) {
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }
    """
    unsigned long long rsc_mix(unsigned long long z) nogil

cdef unsigned long long _GOLDEN = 0x9E3779B97F4A7C15ULL
cdef unsigned long long _MIX1 = 0xBF58476D1CE4E5B9ULL
cdef unsigned long long _MIX2 = 0x94D049BB133111EBULL
cdef double _INV53 = 1.0 / 9007199254740992.0


cdef inline unsigned long long _level_key(unsigned long long seed, long dim) nogil:
    cdef unsigned long long h = rsc_mix(seed ^ _GOLDEN)
    return rsc_mix(h ^ ((<unsigned long long> (dim + 1)) * _MIX1))


def keyed_u01(seed, long dim, verts):
    """Uniform in [0, 1) keyed by (seed, dimension, vertex tuple)."""
    cdef unsigned long long h = _level_key(<unsigned long long> (seed & 0xFFFFFFFFFFFFFFFF), dim)
    cdef unsigned long long v
    for x in verts:
        v = <unsigned long long> (<long long> x)
        h = rsc_mix(h ^ (v * _MIX2))
    return (h >> 11) * _INV53


def stream_u01(seed, long dim, index):
    """Counter-based uniform stream, one lane per (seed, dimension)."""
    cdef unsigned long long h = _level_key(<unsigned long long> (seed & 0xFFFFFFFFFFFFFFFF), dim)
    cdef unsigned long long t = <unsigned long long> ((index + 1) & 0xFFFFFFFFFFFFFFFF)
    return (rsc_mix(h ^ (t * _GOLDEN)) >> 11) * _INV53


def derive_seed(master, index):
    """Injective 64-bit per-trial seed derivation."""
    cdef unsigned long long m = <unsigned long long> (master & 0xFFFFFFFFFFFFFFFF)
    cdef unsigned long long t = <unsigned long long> ((index + 1) & 0xFFFFFFFFFFFFFFFF)
    return rsc_mix(rsc_mix(m ^ _GOLDEN) ^ (t * _MIX2))


def sample_implicit(seed, long dim, verts, long k, double p):
    """Keyed Bernoulli sweep over all k-subsets of ``verts`` in lex order."""
    cdef cnp.ndarray[cnp.int64_t, ndim=1] va = np.ascontiguousarray(verts, dtype=np.int64)
    cdef long m = va.shape[0]
    cdef unsigned long long prefix = _level_key(<unsigned long long> (seed & 0xFFFFFFFFFFFFFFFF), dim)
    cdef list kept = []
    if k <= 0 or k > m:
        return kept
    cdef long* idx = <long*> malloc(k * sizeof(long))
    if idx == NULL:
        raise MemoryError()
    cdef long i, j
    cdef unsigned long long h
    cdef list row
    try:
        for i in range(k):
            idx[i] = i
        while True:
            h = prefix
            for i in range(k):
                h = rsc_mix(h ^ ((<unsigned long long> va[idx[i]]) * _MIX2))
            if (h >> 11) * _INV53 < p:
                row = []
                for i in range(k):
                    row.append(<long> va[idx[i]])
                kept.append(tuple(row))
            i = k - 1
            while i >= 0 and idx[i] == m - k + i:
                i -= 1
            if i < 0:
                break
            idx[i] += 1
            for j in range(i + 1, k):
                idx[j] = idx[j - 1] + 1
    finally:
        free(idx)
    return kept


cdef long long _inv_mod(long long a, long long p) nogil:
    # Fermat: a^(p-2) mod p by binary exponentiation
    cdef long long result = 1
    cdef long long base = a % p
    cdef long long e = p - 2
    while e > 0:
        if e & 1:
            result = (result * base) % p
        base = (base * base) % p
        e >>= 1
    return result


def rank_mod_p(indptr, rows, vals, long nrows, long long prime):
    """Rank over GF(prime) of a sparse matrix given in CSC form.

    Columns reduce against pivots by lowest nonzero row; reduced pivot
    columns live in a growable arena, and the working column uses two
    fixed scratch buffers (a reduced column never exceeds nrows entries).
    """
    cdef cnp.ndarray[cnp.int64_t, ndim=1] ip = np.ascontiguousarray(indptr, dtype=np.int64)
    cdef cnp.ndarray[cnp.int32_t, ndim=1] rw = np.ascontiguousarray(rows, dtype=np.int32)
    cdef cnp.ndarray[cnp.int64_t, ndim=1] vl = np.ascontiguousarray(vals, dtype=np.int64)
    cdef long ncols = ip.shape[0] - 1
    cdef long rank = 0
    if ncols == 0 or nrows == 0:
        return 0

    cdef long long* piv_start = NULL   # per low row: offset into the arena
    cdef long long* piv_count = NULL
    cdef int* cur_r = NULL
    cdef long long* cur_v = NULL
    cdef int* new_r = NULL
    cdef long long* new_v = NULL
    cdef int* arena_r = NULL
    cdef long long* arena_v = NULL
    cdef long long cap = ip[ncols] + 1024
    cdef long long used = 0
    cdef long j, t, clen, nlen, a, b
    cdef long long low, ps, pc, val, scale, nv
    cdef int* tmp_r
    cdef long long* tmp_v

    piv_start = <long long*> malloc(nrows * sizeof(long long))
    piv_count = <long long*> malloc(nrows * sizeof(long long))
    cur_r = <int*> malloc(nrows * sizeof(int))
    cur_v = <long long*> malloc(nrows * sizeof(long long))
    new_r = <int*> malloc(nrows * sizeof(int))
    new_v = <long long*> malloc(nrows * sizeof(long long))
    arena_r = <int*> malloc(cap * sizeof(int))
    arena_v = <long long*> malloc(cap * sizeof(long long))
    if (piv_start == NULL or piv_count == NULL or cur_r == NULL or cur_v == NULL
            or new_r == NULL or new_v == NULL or arena_r == NULL or arena_v == NULL):
        free(piv_start); free(piv_count); free(cur_r); free(cur_v)
        free(new_r); free(new_v); free(arena_r); free(arena_v)
        raise MemoryError()

    try:
        for t in range(nrows):
            piv_start[t] = -1
        for j in range(ncols):
            clen = 0
            for t in range(ip[j], ip[j + 1]):
                val = vl[t] % prime
                if val < 0:
                    val += prime
                if val != 0:
                    cur_r[clen] = rw[t]
                    cur_v[clen] = val
                    clen += 1
            while clen > 0:
                low = cur_r[clen - 1]
                ps = piv_start[low]
                if ps < 0:
                    if used + clen > cap:
                        while used + clen > cap:
                            cap *= 2
                        arena_r = <int*> realloc_or_die(arena_r, cap * sizeof(int))
                        arena_v = <long long*> realloc_or_die(arena_v, cap * sizeof(long long))
                    piv_start[low] = used
                    piv_count[low] = clen
                    for t in range(clen):
                        arena_r[used + t] = cur_r[t]
                        arena_v[used + t] = cur_v[t]
                    used += clen
                    rank += 1
                    break
                pc = piv_count[low]
                scale = (cur_v[clen - 1] * _inv_mod(arena_v[ps + pc - 1], prime)) % prime
                # merge cur - scale * pivot, both sorted ascending by row
                a = 0
                b = 0
                nlen = 0
                while a < clen and b < pc:
                    if cur_r[a] < arena_r[ps + b]:
                        new_r[nlen] = cur_r[a]
                        new_v[nlen] = cur_v[a]
                        a += 1
                        nlen += 1
                    elif cur_r[a] > arena_r[ps + b]:
                        nv = (-scale * arena_v[ps + b]) % prime
                        if nv < 0:
                            nv += prime
                        if nv != 0:
                            new_r[nlen] = arena_r[ps + b]
                            new_v[nlen] = nv
                            nlen += 1
                        b += 1
                    else:
                        nv = (cur_v[a] - scale * arena_v[ps + b]) % prime
                        if nv < 0:
                            nv += prime
                        if nv != 0:
                            new_r[nlen] = cur_r[a]
                            new_v[nlen] = nv
                            nlen += 1
                        a += 1
                        b += 1
                while a < clen:
                    new_r[nlen] = cur_r[a]
                    new_v[nlen] = cur_v[a]
                    a += 1
                    nlen += 1
                while b < pc:
                    nv = (-scale * arena_v[ps + b]) % prime
                    if nv < 0:
                        nv += prime
                    if nv != 0:
                        new_r[nlen] = arena_r[ps + b]
                        new_v[nlen] = nv
                        nlen += 1
                    b += 1
                tmp_r = cur_r; cur_r = new_r; new_r = tmp_r
                tmp_v = cur_v; cur_v = new_v; new_v = tmp_v
                clen = nlen
    finally:
        free(piv_start); free(piv_count); free(cur_r); free(cur_v)
        free(new_r); free(new_v); free(arena_r); free(arena_v)
    return rank


def jacobi_eigenvalues(a, double tol=1e-10, long max_sweeps=60):
    """Eigenvalues of a dense symmetric matrix by cyclic Jacobi rotations."""
    cdef cnp.ndarray[cnp.float64_t, ndim=2] m = np.array(a, dtype=np.float64, copy=True)
    cdef long n = m.shape[0]
    if m.shape[1] != n:
        raise ValueError("matrix must be square")
    if n <= 1:
        return np.diagonal(m).copy()
    cdef long sweep, p, q, i
    cdef double off, apq, theta, t, c, s, rp, rq
    for sweep in range(max_sweeps):
        off = 0.0
        for p in range(n - 1):
            for q in range(p + 1, n):
                if m[p, q] > off:
                    off = m[p, q]
                elif -m[p, q] > off:
                    off = -m[p, q]
        if off <= tol:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = m[p, q]
                if apq <= tol * 1e-2 and apq >= -tol * 1e-2:
                    continue
                theta = (m[q, q] - m[p, p]) / (2.0 * apq)
                if theta > 1e12 or theta < -1e12:
                    t = 1.0 / (2.0 * theta)
                else:
                    if theta >= 0:
                        t = 1.0 / (theta + (theta * theta + 1.0) ** 0.5)
                    else:
                        t = -1.0 / (-theta + (theta * theta + 1.0) ** 0.5)
                c = 1.0 / (t * t + 1.0) ** 0.5
                s = t * c
                for i in range(n):
                    rp = m[p, i]
                    rq = m[q, i]
                    m[p, i] = c * rp - s * rq
                    m[q, i] = s * rp + c * rq
                for i in range(n):
                    rp = m[i, p]
                    rq = m[i, q]
                    m[i, p] = c * rp - s * rq
                    m[i, q] = s * rp + c * rq
                m[p, q] = 0.0
                m[q, p] = 0.0
    return np.sort(np.diagonal(m).copy())
