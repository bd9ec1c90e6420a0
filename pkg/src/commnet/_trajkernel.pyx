#cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled trajectory kernels.

Consumes raw uniform doubles straight from a numpy bit generator so that the
interpreted fallback (which calls Generator.random() on the same bit
generator) produces bit-identical trajectories for the same seed.
"""

from cpython.pycapsule cimport PyCapsule_GetPointer, PyCapsule_IsValid
from libc.math cimport pow, sqrt
from numpy.random cimport bitgen_t

import numpy as np


cdef bitgen_t *_get_state(bit_generator) except NULL:
    capsule = bit_generator.capsule
    if not PyCapsule_IsValid(capsule, "BitGenerator"):
        raise ValueError("expected a numpy BitGenerator capsule")
    return <bitgen_t *> PyCapsule_GetPointer(capsule, "BitGenerator")


def simulate_imm(bit_generator,
                 Py_ssize_t n_jumps,
                 double rho, double neg_gamma,
                 double xlo, double wx, double ylo, double wy,
                 tuple wait_in, tuple wait_out,
                 double cxlo, double cxhi, double cylo, double cyhi):
    cdef bitgen_t *rng = _get_state(bit_generator)
    cdef bint in_const = wait_in[0]
    cdef double in_tconst = wait_in[1], in_amb = wait_in[2]
    cdef double in_span = wait_in[3], in_ninv = wait_in[4]
    cdef bint out_const = wait_out[0]
    cdef double out_tconst = wait_out[1], out_amb = wait_out[2]
    cdef double out_span = wait_out[3], out_ninv = wait_out[4]

    loc_x_arr = np.empty(n_jumps + 1, dtype=np.float64)
    loc_y_arr = np.empty(n_jumps + 1, dtype=np.float64)
    dest_arr = np.empty(n_jumps, dtype=np.int64)
    kind_arr = np.empty(n_jumps, dtype=np.uint8)
    pause_arr = np.empty(n_jumps, dtype=np.float64)
    tickets_arr = np.empty(n_jumps + 1, dtype=np.int64)

    cdef double[::1] loc_x = loc_x_arr
    cdef double[::1] loc_y = loc_y_arr
    cdef long long[::1] dest_v = dest_arr
    cdef unsigned char[::1] kind_v = kind_arr
    cdef double[::1] pause_v = pause_arr
    cdef long long[::1] tickets = tickets_arr

    cdef Py_ssize_t j, n_loc, pick, dest
    cdef double u, x, y

    loc_x[0] = xlo + wx * rng.next_double(rng.state)
    loc_y[0] = ylo + wy * rng.next_double(rng.state)
    tickets[0] = 0
    n_loc = 1

    for j in range(n_jumps):
        u = rng.next_double(rng.state)
        if u < rho * pow(<double> n_loc, neg_gamma):
            x = xlo + wx * rng.next_double(rng.state)
            y = ylo + wy * rng.next_double(rng.state)
            dest = n_loc
            loc_x[dest] = x
            loc_y[dest] = y
            n_loc += 1
            kind_v[j] = 0
        else:
            pick = <Py_ssize_t> (rng.next_double(rng.state) * (j + 1))
            if pick > j:
                pick = j
            dest = tickets[pick]
            x = loc_x[dest]
            y = loc_y[dest]
            kind_v[j] = 1
        dest_v[j] = dest
        tickets[j + 1] = dest
        u = rng.next_double(rng.state)
        if cxlo <= x and x <= cxhi and cylo <= y and y <= cyhi:
            pause_v[j] = in_tconst if in_const else pow(in_amb - u * in_span, in_ninv)
        else:
            pause_v[j] = out_tconst if out_const else pow(out_amb - u * out_span, out_ninv)

    return loc_x_arr[:n_loc], loc_y_arr[:n_loc], dest_arr, kind_arr, pause_arr


def simulate_rwp(bit_generator,
                 Py_ssize_t n_jumps,
                 double xlo, double wx, double ylo, double wy,
                 tuple wait):
    cdef bitgen_t *rng = _get_state(bit_generator)
    cdef bint w_const = wait[0]
    cdef double w_tconst = wait[1], w_amb = wait[2]
    cdef double w_span = wait[3], w_ninv = wait[4]

    loc_x_arr = np.empty(n_jumps + 1, dtype=np.float64)
    loc_y_arr = np.empty(n_jumps + 1, dtype=np.float64)
    pause_arr = np.empty(n_jumps, dtype=np.float64)
    cdef double[::1] loc_x = loc_x_arr
    cdef double[::1] loc_y = loc_y_arr
    cdef double[::1] pause_v = pause_arr

    cdef Py_ssize_t j
    cdef double u

    loc_x[0] = xlo + wx * rng.next_double(rng.state)
    loc_y[0] = ylo + wy * rng.next_double(rng.state)
    for j in range(n_jumps):
        loc_x[j + 1] = xlo + wx * rng.next_double(rng.state)
        loc_y[j + 1] = ylo + wy * rng.next_double(rng.state)
        u = rng.next_double(rng.state)
        pause_v[j] = w_tconst if w_const else pow(w_amb - u * w_span, w_ninv)

    return loc_x_arr, loc_y_arr, pause_arr
