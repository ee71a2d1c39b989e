# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled kernel: evaluates a postfix formula program over blocks of 64-bit words,
64 valuations per word."""

from libc.stdint cimport uint64_t
from libc.stdlib cimport malloc, free

cdef enum:
    OP_TRUE = 0
    OP_FALSE = 1
    OP_NOT = 2
    OP_AND = 3
    OP_OR = 4
    OP_VAR = 8

cdef uint64_t ONES = 0xFFFFFFFFFFFFFFFF
cdef uint64_t PAT[6]
PAT[0] = 0xAAAAAAAAAAAAAAAA
PAT[1] = 0xCCCCCCCCCCCCCCCC
PAT[2] = 0xF0F0F0F0F0F0F0F0
PAT[3] = 0xFF00FF00FF00FF00
PAT[4] = 0xFFFF0000FFFF0000
PAT[5] = 0xFFFFFFFF00000000


cdef enum:
    BLOCK = 64  # words evaluated per pass over the program


cdef int _block(int* prog, int n, uint64_t first, uint64_t count, uint64_t* stack, uint64_t* out) nogil:
    """Evaluate words ``first .. first+count-1`` of the table; ``count`` <= BLOCK."""
    cdef int sp = 0
    cdef int i, op, j
    cdef uint64_t k, v
    cdef uint64_t* top
    cdef uint64_t* below
    for i in range(n):
        op = prog[i]
        if op >= OP_VAR:
            j = op - OP_VAR
            top = stack + sp * BLOCK
            if j < 6:
                for k in range(count):
                    top[k] = PAT[j]
            else:
                for k in range(count):
                    top[k] = ONES if ((first + k) >> (j - 6)) & 1 else 0
            sp += 1
        elif op == OP_AND:
            sp -= 1
            top = stack + sp * BLOCK
            below = top - BLOCK
            for k in range(count):
                below[k] &= top[k]
        elif op == OP_OR:
            sp -= 1
            top = stack + sp * BLOCK
            below = top - BLOCK
            for k in range(count):
                below[k] |= top[k]
        elif op == OP_NOT:
            top = stack + (sp - 1) * BLOCK
            for k in range(count):
                top[k] ^= ONES
        elif op == OP_TRUE or op == OP_FALSE:
            top = stack + sp * BLOCK
            v = ONES if op == OP_TRUE else 0
            for k in range(count):
                top[k] = v
            sp += 1
        else:
            return -1
    if sp != 1:
        return -1
    for k in range(count):
        out[k] = stack[k]
    return 0


cdef int* _load(prog, int* n) except NULL:
    cdef int k = len(prog)
    cdef int* buf = <int*> malloc((k + 1) * sizeof(int))
    if buf == NULL:
        raise MemoryError()
    for i, op in enumerate(prog):
        buf[i] = op
    n[0] = k
    return buf


def is_sat(prog, int nvars):
    cdef int n
    cdef int* buf = _load(prog, &n)
    cdef uint64_t* stack = <uint64_t*> malloc((n + 1) * BLOCK * sizeof(uint64_t))
    cdef uint64_t vals[BLOCK]
    cdef uint64_t mask, w, k, count, nwords
    cdef int rc = 0
    cdef bint found = False
    try:
        if stack == NULL:
            raise MemoryError()
        mask = ONES if nvars >= 6 else ((<uint64_t> 1) << (1 << nvars)) - 1
        nwords = (<uint64_t> 1) << (nvars - 6) if nvars > 6 else 1
        with nogil:
            w = 0
            while w < nwords and not found:
                count = nwords - w if nwords - w < BLOCK else BLOCK
                rc = _block(buf, n, w, count, stack, vals)
                if rc != 0:
                    break
                for k in range(count):
                    if vals[k] & mask:
                        found = True
                        break
                w += count
        if rc != 0:
            raise ValueError("malformed program")
        return found
    finally:
        free(buf)
        free(stack)


def truth_table(prog, int nvars):
    cdef int n
    cdef int* buf = _load(prog, &n)
    cdef uint64_t* stack = <uint64_t*> malloc((n + 1) * BLOCK * sizeof(uint64_t))
    cdef uint64_t nwords = (<uint64_t> 1) << (nvars - 6) if nvars > 6 else 1
    cdef uint64_t* words = <uint64_t*> malloc(nwords * sizeof(uint64_t))
    cdef uint64_t w, count
    cdef int rc = 0
    try:
        if stack == NULL or words == NULL:
            raise MemoryError()
        with nogil:
            w = 0
            while w < nwords:
                count = nwords - w if nwords - w < BLOCK else BLOCK
                rc = _block(buf, n, w, count, stack, words + w)
                if rc != 0:
                    break
                w += count
        if rc != 0:
            raise ValueError("malformed program")
        if nvars < 6:
            words[0] &= ((<uint64_t> 1) << (1 << nvars)) - 1
        raw = (<char*> words)[:nwords * 8]
        return int.from_bytes(raw, "little")
    finally:
        free(buf)
        free(stack)
        free(words)
