import numpy as np
import pytest
import sympy as sp
from hypothesis import given, settings, strategies as st

from cubicalg import (
    BilinearForm,
    CubicForm,
    CounterexampleParams,
    algebra_from_cubic,
    eval_f,
    fd_check,
    grad_u,
    hess_u,
    left_mult_matrix,
    make_counterexample,
    make_random_algebra,
    multiply,
)
from cubicalg.search import complement_basis


def symbolic_f(T):
    """Exact value/gradient/Hessian of f = <x^2,x>/|x|^3 for identity Gram, via sympy."""
    n = T.shape[0]
    xs = sp.symbols(f"x0:{n}", real=True)
    N = sum(sp.nsimplify(float(T[i, j, k])) * xs[i] * xs[j] * xs[k]
            for i in range(n) for j in range(n) for k in range(n))
    f = N / sp.sqrt(sum(x**2 for x in xs)) ** 3
    grad = [sp.diff(f, x) for x in xs]
    hess = sp.hessian(f, xs)
    fv = sp.lambdify(xs, f)
    gv = sp.lambdify(xs, grad)
    hv = sp.lambdify(xs, hess)
    return (lambda x: float(fv(*x)),
            lambda x: np.array(gv(*x), dtype=float),
            lambda x: np.array(hv(*x), dtype=float))


# -- grad_u / hess_u -----------------------------------------------------------

def test_grad_u_examples(hadamard3, ce2):
    np.testing.assert_allclose(grad_u(hadamard3, [1, 2, 3]), [0.5, 2.0, 4.5])
    assert np.all(grad_u(hadamard3, np.zeros(3)) == 0)
    np.testing.assert_allclose(grad_u(ce2, [0, 1]), [0.25, 0.0])
    with pytest.raises(ValueError):
        grad_u(ce2, [1, 2, 3])


def test_hess_u_examples(hadamard3, ce2):
    assert np.all(hess_u(hadamard3, np.zeros(3)) == 0)
    np.testing.assert_allclose(hess_u(hadamard3, [1, 2, 3]), np.diag([1.0, 2.0, 3.0]))
    np.testing.assert_allclose(hess_u(ce2, [1, 0]), np.diag([2.0, 0.5]))


@settings(max_examples=40, deadline=None, derandomize=True)
@given(st.integers(1, 6), st.integers(0, 10**6))
def test_gradient_is_half_square_and_hessian_is_L(n, seed):
    A = make_random_algebra(n, seed)
    rng = np.random.default_rng(seed)
    x, y = rng.standard_normal((2, n))
    assert np.abs(grad_u(A, x) - 0.5 * multiply(A, x, x)).max() <= 1e-14
    assert np.abs(hess_u(A, x) @ y - multiply(A, x, y)).max() <= 1e-12
    np.testing.assert_array_equal(hess_u(A, x), left_mult_matrix(A, x))


# -- eval_f --------------------------------------------------------------------

def test_eval_f_oddness_and_stationary_unit(hadamard3, rng):
    x = rng.standard_normal(3)
    assert eval_f(hadamard3, -x).value == pytest.approx(-eval_f(hadamard3, x).value, abs=1e-15)
    ev = eval_f(hadamard3, [1, 0, 0])
    assert ev.value == 1.0
    assert np.abs(ev.gradient).max() == 0.0
    with pytest.raises(ValueError):
        eval_f(hadamard3, np.zeros(3))


@pytest.mark.parametrize("seed", [1, 2, 3])
def test_eval_f_matches_symbolic_derivatives(seed):
    A = make_random_algebra(3, seed)
    fv, gv, hv = symbolic_f(A.cubic.tensor)
    rng = np.random.default_rng(seed)
    for _ in range(3):
        x = rng.standard_normal(3) * rng.uniform(0.5, 2.0)  # off the sphere as well
        ev = eval_f(A, x)
        assert ev.value == pytest.approx(fv(x), rel=1e-12)
        np.testing.assert_allclose(ev.gradient, gv(x), rtol=1e-10, atol=1e-12)
        np.testing.assert_allclose(ev.hessian, hv(x), rtol=1e-10, atol=1e-12)


def test_counterexample_symbolic_hessian_at_idempotent(ce2):
    _, _, hv = symbolic_f(ce2.cubic.tensor)
    c = np.array([0.5, 0.0])
    np.testing.assert_allclose(eval_f(ce2, c).hessian, hv(c), atol=1e-12)
    np.testing.assert_allclose(hv(c), [[0, 0], [0, -12]], atol=1e-12)


@settings(max_examples=40, deadline=None, derandomize=True)
@given(st.integers(1, 6), st.integers(0, 10**6), st.floats(0.1, 10), st.booleans())
def test_homogeneity_and_euler(n, seed, t, flip):
    A = make_random_algebra(n, seed)
    x = np.random.default_rng(seed).standard_normal(n)
    s = -t if flip else t
    f0 = eval_f(A, x)
    assert eval_f(A, s * x).value == pytest.approx(np.sign(s) * f0.value, rel=1e-12, abs=1e-12)
    assert abs(f0.gradient @ x) <= 1e-10 * max(1.0, np.linalg.norm(x))


def test_gradient_vanishes_at_eigenvectors_of_square(ce2):
    x = np.array([1.0, 0.0])  # x^2 = 2x
    assert np.linalg.norm(eval_f(ce2, x).gradient) <= 1e-10
    A = make_counterexample(CounterexampleParams.default(4))
    assert np.linalg.norm(eval_f(A, -np.eye(4)[0]).gradient) <= 1e-10


def test_restricted_hessian_at_idempotent_general_gram():
    # Hadamard cubic with Gram diag(2, 3, 5): idempotents are d_i e_i combinations
    d = np.array([2.0, 3.0, 5.0])
    A = algebra_from_cubic(CubicForm.from_entries(3, {(i, i, i): 1.0 for i in range(3)}),
                           BilinearForm(np.diag(d)))
    for c in (np.array([2.0, 0, 0]), np.array([2.0, 3.0, 0]), d.copy()):
        np.testing.assert_allclose(multiply(A, c, c), c, atol=1e-14)
        y = A.to_orthonormal(c)
        Q = complement_basis(y)
        L = A.orthonormal.lmat(y)
        r = np.linalg.norm(y)
        target = Q.T @ (3 * (2 * L - np.eye(3))) @ Q
        # at c itself the Hessian scales like |c|^-2 relative to the unit point
        H_c = Q.T @ eval_f(A, y, orthonormal=True).hessian @ Q
        np.testing.assert_allclose(H_c, target / r**3, atol=1e-12)
        H_unit = Q.T @ eval_f(A, y / r, orthonormal=True).hessian @ Q
        np.testing.assert_allclose(H_unit, target / r, atol=1e-12)


# -- fd_check ------------------------------------------------------------------

def test_fd_check_hadamard(hadamard3, rng):
    x = rng.standard_normal(3)
    rep = fd_check(hadamard3, x / np.linalg.norm(x), 1e-5)
    assert rep.passed and rep.max_error <= 1e-6


def test_fd_check_zero_algebra():
    A = algebra_from_cubic(CubicForm.zero(3))
    rep = fd_check(A, np.array([0.3, 0.4, 0.5]))
    assert rep.max_error == 0.0


def test_fd_check_counterexample_n4(rng):
    A = make_counterexample(CounterexampleParams.default(4))
    for _ in range(5):
        x = rng.standard_normal(4)
        assert fd_check(A, x / np.linalg.norm(x)).max_error <= 1e-6


def test_fd_check_general_gram(rng):
    m = rng.standard_normal((4, 4))
    form = BilinearForm(m @ m.T + np.eye(4))
    A = algebra_from_cubic(CubicForm(rng.uniform(-1, 1, (4, 4, 4))), form)
    x = rng.standard_normal(4)
    assert fd_check(A, x).max_error <= 1e-6


def test_fd_check_detects_a_wrong_formula(monkeypatch, rng):
    # the printed |x|^5 denominator, off the unit sphere, is caught
    import cubicalg.calculus as calc
    real = calc.eval_f

    def wrong(A, x, orthonormal=False):
        ev = real(A, x, orthonormal)
        r = np.linalg.norm(x if orthonormal else A.to_orthonormal(x))
        return calc.RayleighEval(ev.value, ev.gradient, ev.hessian * r**2)

    monkeypatch.setattr(calc, "eval_f", wrong)
    A = make_random_algebra(3, 4)
    x = 2.0 * rng.standard_normal(3)
    assert fd_check(A, x).f_hessian > 1e-3


def test_fd_check_rejects_bad_step(hadamard3):
    with pytest.raises(ValueError):
        fd_check(hadamard3, np.ones(3), h=2.0)
    with pytest.raises(ValueError):
        fd_check(hadamard3, np.zeros(3))
