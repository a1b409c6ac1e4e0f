# Compiled statevector kernels. Mirrors _kernels_py.py exactly; see that
# module for the gate-code table and the qubit/bit convention.
from libc.math cimport cos, sin

cdef enum:
    K_RX = 0
    K_RY = 1
    K_RZ = 2
    K_CNOT = 3
    K_X = 4
    K_Y = 5
    K_Z = 6


cdef inline void _apply_1q(double complex[::1] a, Py_ssize_t dim, Py_ssize_t stride,
                           double complex m00, double complex m01,
                           double complex m10, double complex m11) noexcept nogil:
    cdef Py_ssize_t blk, base, k
    cdef double complex x, y
    for blk in range(dim // (2 * stride)):
        base = 2 * stride * blk
        for k in range(base, base + stride):
            x = a[k]
            y = a[k + stride]
            a[k] = m00 * x + m01 * y
            a[k + stride] = m10 * x + m11 * y


cdef inline void _apply_diag(double complex[::1] a, Py_ssize_t dim, Py_ssize_t stride,
                             double complex d0, double complex d1) noexcept nogil:
    cdef Py_ssize_t blk, base, k
    for blk in range(dim // (2 * stride)):
        base = 2 * stride * blk
        for k in range(base, base + stride):
            a[k] = d0 * a[k]
            a[k + stride] = d1 * a[k + stride]


cdef inline void _apply_cnot(double complex[::1] a, Py_ssize_t dim,
                             Py_ssize_t cbit, Py_ssize_t tbit) noexcept nogil:
    cdef Py_ssize_t k
    cdef double complex tmp
    for k in range(dim):
        if (k & cbit) and not (k & tbit):
            tmp = a[k]
            a[k] = a[k | tbit]
            a[k | tbit] = tmp


cdef void _run(double complex[::1] a, int n, const int[::1] kinds, const int[::1] q0,
               const int[::1] q1, const double[::1] angles) noexcept nogil:
    cdef Py_ssize_t dim = a.shape[0]
    cdef Py_ssize_t g, stride
    cdef double c, s
    cdef int kind
    for g in range(kinds.shape[0]):
        kind = kinds[g]
        stride = (<Py_ssize_t> 1) << (n - 1 - q0[g])
        if kind == K_RX:
            c = cos(0.5 * angles[g])
            s = sin(0.5 * angles[g])
            _apply_1q(a, dim, stride, c, -1j * s, -1j * s, c)
        elif kind == K_RY:
            c = cos(0.5 * angles[g])
            s = sin(0.5 * angles[g])
            _apply_1q(a, dim, stride, c, -s, s, c)
        elif kind == K_RZ:
            c = cos(0.5 * angles[g])
            s = sin(0.5 * angles[g])
            _apply_diag(a, dim, stride, c - 1j * s, c + 1j * s)
        elif kind == K_CNOT:
            _apply_cnot(a, dim, stride, (<Py_ssize_t> 1) << (n - 1 - q1[g]))
        elif kind == K_X:
            _apply_1q(a, dim, stride, 0, 1, 1, 0)
        elif kind == K_Y:
            _apply_1q(a, dim, stride, 0, -1j, 1j, 0)
        elif kind == K_Z:
            _apply_diag(a, dim, stride, 1, -1)


cdef double complex _expect(const double complex[::1] a, const long long[::1] flips,
                            const double complex[:, ::1] diags) noexcept nogil:
    cdef Py_ssize_t f, k
    cdef Py_ssize_t dim = a.shape[0]
    cdef long long flip
    cdef double complex acc = 0
    for f in range(flips.shape[0]):
        flip = flips[f]
        for k in range(dim):
            acc = acc + a[k ^ flip].conjugate() * diags[f, k] * a[k]
    return acc


def apply_program(double complex[::1] amps, int n, const int[::1] kinds, const int[::1] q0,
                  const int[::1] q1, const double[::1] angles):
    with nogil:
        _run(amps, n, kinds, q0, q1, angles)


def expectation(const double complex[::1] amps, const long long[::1] flips,
                const double complex[:, ::1] diags):
    cdef double complex out
    with nogil:
        out = _expect(amps, flips, diags)
    return complex(out.real, out.imag)


def program_expectation(const double complex[::1] psi0, double complex[::1] work, int n,
                        const int[::1] kinds, const int[::1] q0, const int[::1] q1,
                        const double[::1] angles, const long long[::1] flips,
                        const double complex[:, ::1] diags):
    cdef double complex out
    with nogil:
        work[:] = psi0
        _run(work, n, kinds, q0, q1, angles)
        out = _expect(work, flips, diags)
    return complex(out.real, out.imag)
