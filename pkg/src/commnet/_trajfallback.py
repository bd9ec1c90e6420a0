"""Pure-Python twin of the compiled trajectory kernels.

Must consume the bit generator's uniform stream in exactly the same order and
evaluate exactly the same floating-point expressions as _trajkernel.pyx, so a
given seed yields bit-identical trajectories on either backend.
"""

import math

import numpy as np


def simulate_imm(bit_generator, n_jumps, rho, neg_gamma,
                 xlo, wx, ylo, wy, wait_in, wait_out,
                 cxlo, cxhi, cylo, cyhi):
    rand = np.random.Generator(bit_generator).random
    in_const, in_tconst, in_amb, in_span, in_ninv = wait_in
    out_const, out_tconst, out_amb, out_span, out_ninv = wait_out

    loc_x = [xlo + wx * rand()]
    loc_y = [ylo + wy * rand()]
    tickets = [0]
    dest_arr = np.empty(n_jumps, dtype=np.int64)
    kind_arr = np.empty(n_jumps, dtype=np.uint8)
    pause_arr = np.empty(n_jumps, dtype=np.float64)

    n_loc = 1
    for j in range(n_jumps):
        u = rand()
        if u < rho * math.pow(float(n_loc), neg_gamma):
            x = xlo + wx * rand()
            y = ylo + wy * rand()
            dest = n_loc
            loc_x.append(x)
            loc_y.append(y)
            n_loc += 1
            kind_arr[j] = 0
        else:
            pick = int(rand() * (j + 1))
            if pick > j:
                pick = j
            dest = tickets[pick]
            x = loc_x[dest]
            y = loc_y[dest]
            kind_arr[j] = 1
        dest_arr[j] = dest
        tickets.append(dest)
        u = rand()
        if cxlo <= x <= cxhi and cylo <= y <= cyhi:
            pause_arr[j] = in_tconst if in_const else math.pow(in_amb - u * in_span, in_ninv)
        else:
            pause_arr[j] = out_tconst if out_const else math.pow(out_amb - u * out_span, out_ninv)

    return (np.array(loc_x), np.array(loc_y), dest_arr, kind_arr, pause_arr)


def simulate_rwp(bit_generator, n_jumps, xlo, wx, ylo, wy, wait):
    rand = np.random.Generator(bit_generator).random
    w_const, w_tconst, w_amb, w_span, w_ninv = wait

    loc_x = np.empty(n_jumps + 1)
    loc_y = np.empty(n_jumps + 1)
    pause_arr = np.empty(n_jumps, dtype=np.float64)
    loc_x[0] = xlo + wx * rand()
    loc_y[0] = ylo + wy * rand()
    for j in range(n_jumps):
        loc_x[j + 1] = xlo + wx * rand()
        loc_y[j + 1] = ylo + wy * rand()
        u = rand()
        pause_arr[j] = w_tconst if w_const else math.pow(w_amb - u * w_span, w_ninv)

    return loc_x, loc_y, pause_arr
