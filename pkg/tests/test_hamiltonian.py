from __future__ import annotations

import math

import numpy as np
import pytest
from scipy.integrate import quad

from anyonchain.category import conjugate_braiding
from anyonchain.fusion import enumerate_basis
from anyonchain.hamiltonian import (
    GoldenChainSpec,
    asymmetry_curve,
    build_hamiltonian,
    build_nn_projector,
    build_nnn_term,
    central_window,
    default_window,
    diagonalize,
    eigenstate_aee_curve,
    finite_size_fit,
    golden_chain_spectrum,
    half_chain_ratio,
    level_spacing_ratios,
    parity_basis,
    parity_operator,
    reference_ratio_pdfs,
)
from conftest import PHI, su2k

LOG_PHI = math.log(PHI)


def dense(m):
    return m.toarray()


class TestProjectors:
    @pytest.mark.parametrize("L,J", [(5, 0), (6, 1), (8, 0)])
    def test_projector_properties(self, fib, L, J):
        basis = enumerate_basis(fib, "tau", L, J)
        for i in range(1, L):
            P = dense(build_nn_projector(fib, basis, i))
            assert np.abs(P @ P - P).max() < 1e-10 and np.abs(P - P.T.conj()).max() < 1e-10
            ev = np.linalg.eigvalsh(P)
            assert np.all(np.minimum(np.abs(ev), np.abs(ev - 1)) < 1e-10)

    def test_two_sites(self, fib):
        basis = enumerate_basis(fib, "tau", 2, 0)
        assert dense(build_nn_projector(fib, basis, 1)).tolist() == [[1.0]]

    def test_trace_counts_trivial_channels(self, fib):
        # tr Pi^(i,i+1) = #paths of L anyons whose pair (i, i+1) fuses to 0,
        # counted by enumerating channel-resolved trees: the pair is replaced by
        # a vacuum, leaving a chain of L-2 anyons with the same ends
        from anyonchain.fusion import dim_bruteforce

        for L in (5, 7):
            for J in (0, 1):
                basis = enumerate_basis(fib, "tau", L, J)
                for i in range(1, L):
                    tr = np.trace(dense(build_nn_projector(fib, basis, i)))
                    expect = dim_bruteforce(fib, "tau", L - 2, J) if L > 2 else int(J == 0)
                    assert tr == pytest.approx(expect, abs=1e-10)

    def test_index_errors(self, fib):
        basis = enumerate_basis(fib, "tau", 5, 0)
        with pytest.raises(IndexError):
            build_nn_projector(fib, basis, 5)
        with pytest.raises(IndexError):
            build_nnn_term(fib, basis, 4)


class TestNNN:
    def test_hermitian_real_bounded(self, fib):
        basis = enumerate_basis(fib, "tau", 4, 1)
        for i in (1, 2):
            T = dense(build_nnn_term(fib, basis, i))
            assert np.isrealobj(T)
            assert np.abs(T - T.T).max() < 1e-12
            ev = np.linalg.eigvalsh(T)
            assert ev.min() > -1e-12 and ev.max() < 1 + 1e-12

    def test_chirality_even(self, fib):
        basis = enumerate_basis(fib, "tau", 7, 0)
        for i in range(1, 6):
            a = dense(build_nnn_term(fib, basis, i))
            b = dense(build_nnn_term(fib, basis, i, chirality=-1))
            assert np.abs(a - b).max() < 1e-12

    def test_conjugated_braiding_same_spectrum(self, fib):
        conj = conjugate_braiding(fib)
        for lam in (0.0, 0.9):
            e1 = np.linalg.eigvalsh(dense(build_hamiltonian(GoldenChainSpec(9, lam, 0, model=fib))))
            e2 = np.linalg.eigvalsh(dense(build_hamiltonian(GoldenChainSpec(9, lam, 0, model=conj))))
            assert np.abs(e1 - e2).max() < 1e-10


class TestHamiltonian:
    def test_two_sites(self):
        assert dense(build_hamiltonian(GoldenChainSpec(2, 0.0, 0))).tolist() == [[-1.0]]

    def test_hand_built_L4(self):
        # paths (0,t,0,t,0), (0,t,t,t,0): bonds 1 and 3 see the channel x_2 directly,
        # bond 2 projects onto the first column of F^{ttt}_t
        v = np.array([1 / PHI, PHI**-0.5])
        H = -(2 * np.diag([1.0, 0.0]) + np.outer(v, v))
        got = dense(build_hamiltonian(GoldenChainSpec(4, 0.0, 0)))
        assert np.abs(got - H).max() < 1e-14
        res = diagonalize(build_hamiltonian(GoldenChainSpec(4, 0.0, 0)))
        assert np.allclose(res.eigenvalues, np.linalg.eigvalsh(H), atol=1e-14)

    def test_L3_trace(self, fib):
        spec = GoldenChainSpec(3, 0.0, "tau")
        H = build_hamiltonian(spec)
        basis = spec.basis
        traces = sum(np.trace(dense(build_nn_projector(fib, basis, i))) for i in (1, 2))
        assert H.shape == (2, 2)
        assert diagonalize(H).eigenvalues.sum() == pytest.approx(-traces, abs=1e-12)

    @pytest.mark.parametrize("L", [6, 10, 14, 16])
    def test_symmetric(self, L):
        H = build_hamiltonian(GoldenChainSpec(L, 0.9, 0))
        assert abs(H - H.T).max() < 1e-12

    def test_lambda_zero_bounds(self):
        for L in (6, 9):
            e = diagonalize(build_hamiltonian(GoldenChainSpec(L, 0.0, 1))).eigenvalues
            assert e.min() >= -(L - 1) - 1e-10 and e.max() <= 1e-10

    def test_bad_specs(self):
        with pytest.raises(ValueError):
            GoldenChainSpec(1)
        with pytest.raises(ValueError):
            GoldenChainSpec(4, parity=2)
        with pytest.raises(ValueError):
            build_hamiltonian(GoldenChainSpec(3, 0.0, "0", model=su2k(2), jext="1/2"))


class TestParity:
    @pytest.mark.parametrize("L", range(2, 13))
    def test_involution(self, fib, L):
        for J in (0, 1):
            basis = enumerate_basis(fib, "tau", L, J)
            if basis.dim == 0:
                continue
            R = dense(parity_operator(fib, basis))
            assert np.abs(R @ R - np.eye(basis.dim)).max() < 1e-10
            assert np.abs(R - R.T).max() < 1e-10
            ev = np.linalg.eigvalsh(R)
            assert np.all(np.minimum(np.abs(ev - 1), np.abs(ev + 1)) < 1e-10)

    @pytest.mark.parametrize("lam", [0.0, 0.9])
    @pytest.mark.parametrize("L,J", [(8, 0), (11, 1), (12, 0)])
    def test_commutes(self, fib, lam, L, J):
        spec = GoldenChainSpec(L, lam, J)
        H = dense(build_hamiltonian(spec))
        R = dense(parity_operator(fib, spec.basis))
        assert np.abs(H @ R - R @ H).max() < 1e-10

    def test_mirrors_local_terms(self, fib):
        basis = enumerate_basis(fib, "tau", 9, 1)
        R = dense(parity_operator(fib, basis))
        for i in range(1, 9):
            Pi = dense(build_nn_projector(fib, basis, i))
            Pm = dense(build_nn_projector(fib, basis, 9 - i))
            assert np.abs(R @ Pi @ R - Pm).max() < 1e-10

    def test_sector_split(self, fib):
        spec = GoldenChainSpec(10, 0.9, 0)
        R = parity_operator(fib, spec.basis)
        plus, minus = parity_basis(R, 1), parity_basis(R, -1)
        assert plus.shape[1] + minus.shape[1] == spec.basis.dim
        full = golden_chain_spectrum(spec)
        assert np.allclose(np.sort(full.eigenvalues), np.linalg.eigvalsh(dense(build_hamiltonian(spec))), atol=1e-10)
        assert set(np.unique(full.parities)) == {-1, 1}


class TestDiagonalize:
    def test_one_by_one(self):
        res = diagonalize(np.array([[2.5]]), vectors=True)
        assert res.eigenvalues.tolist() == [2.5]

    def test_trace(self):
        H = build_hamiltonian(GoldenChainSpec(12, 0.9, 1))
        e = diagonalize(H).eigenvalues
        assert e.sum() == pytest.approx(H.diagonal().sum(), rel=1e-8)
        assert np.all(np.diff(e) >= 0)

    def test_vectors_residual(self, fib):
        spec = GoldenChainSpec(10, 0.9, 0, 1)
        res = golden_chain_spectrum(spec, vectors=True)
        H = dense(build_hamiltonian(spec))
        V = res.eigenvectors
        assert np.abs(H @ V - V * res.eigenvalues).max() < 1e-8 * np.abs(H).max()
        R = dense(parity_operator(fib, spec.basis))
        assert np.abs(R @ V - V).max() < 1e-10

    def test_empty(self):
        with pytest.raises(ValueError):
            diagonalize(np.zeros((0, 0)))


class TestLevelStatistics:
    def test_equal_spacing(self):
        st = level_spacing_ratios(np.arange(10.0))
        assert st.mean == 1.0 and st.n_dropped == 0
        assert np.isnan(st.ratios[0]) and np.isnan(st.ratios[-1])

    def test_degenerate_dropped(self):
        st = level_spacing_ratios([0.0, 1.0, 1.0, 2.5, 3.0, 4.0])
        assert st.n_dropped == 2

    def test_too_few(self):
        with pytest.raises(ValueError):
            level_spacing_ratios([0.0, 1.0, 1.0])

    def test_poisson_and_goe_samples(self):
        rng = np.random.default_rng(1)
        poisson = np.cumsum(rng.exponential(size=20000))
        assert level_spacing_ratios(poisson).mean == pytest.approx(2 * math.log(2) - 1, abs=0.01)
        A = rng.standard_normal((800, 800))
        e = np.linalg.eigvalsh(A + A.T)
        assert level_spacing_ratios(e[200:600]).mean == pytest.approx(0.5307, abs=0.03)


class TestReferencePdfs:
    def test_values(self):
        assert reference_ratio_pdfs(0.0)["goe"] == 0
        assert quad(lambda r: reference_ratio_pdfs(r)["goe"], 0, 1)[0] == pytest.approx(1, abs=1e-8)
        assert quad(lambda r: reference_ratio_pdfs(r)["poisson"], 0, 1)[0] == pytest.approx(1, abs=1e-10)
        mean = quad(lambda r: r * reference_ratio_pdfs(r)["poisson"], 0, 1)[0]
        assert mean == pytest.approx(2 * math.log(2) - 1, abs=1e-10)
        assert mean == pytest.approx(0.3867, abs=5e-4)

    def test_caption_variant(self):
        assert reference_ratio_pdfs(0.5, caption_variant=True)["poisson"] == pytest.approx(2 / 1.25)

    def test_domain(self):
        with pytest.raises(ValueError):
            reference_ratio_pdfs(1.5)


class TestEigenstateEntanglement:
    def test_window(self):
        assert default_window(9000) == 2000 and default_window(300) == 100
        assert central_window(10, 4) == slice(3, 7)
        with pytest.warns(UserWarning):
            assert central_window(5, 9) == slice(0, 5)

    def test_single_site_cut(self):
        c = eigenstate_aee_curve(GoldenChainSpec(12, 0.9, 0, 1), LA_list=[1])
        assert 0 <= c.mean_aee[0] <= LOG_PHI + 1e-12

    def test_ceiling(self, fib):
        from anyonchain.entropy import batch_aee
        from anyonchain.fusion import bipartite_decomposition

        L = 12
        for J in (0, 1):
            spec = GoldenChainSpec(L, 0.9, J)
            res = golden_chain_spectrum(spec, vectors=True)
            for LA in range(1, L):
                dec = bipartite_decomposition(fib, "tau", L, LA, J)
                S = batch_aee(dec, dec.to_bipartite(res.eigenvectors))
                bound = min(LA, L - LA) * LOG_PHI + math.log(fib.qdim[J]) + 0.1
                assert S.max() <= bound

    def test_abelian_J_symmetric(self):
        f, d = asymmetry_curve(GoldenChainSpec(14, 0.9, 0, 1))
        assert np.all(d < 0.02)
        assert f[-1] == 0.5 and d[-1] == 0

    def test_chaotic_above_integrable_small(self):
        a = eigenstate_aee_curve(GoldenChainSpec(12, 0.9, 0, 1), LA_list=[6])
        b = eigenstate_aee_curve(GoldenChainSpec(12, 0.0, 0, 1), LA_list=[6])
        assert a.mean_aee[0] > b.mean_aee[0]

    def test_thread_independent(self):
        spec = GoldenChainSpec(11, 0.9, 1, 1)
        a = eigenstate_aee_curve(spec, LA_list=[3, 5], threads=1)
        b = eigenstate_aee_curve(spec, LA_list=[3, 5], threads=4)
        assert np.array_equal(a.mean_aee, b.mean_aee)


def test_finite_size_fit_recovers_coefficients():
    L = np.array([10, 12, 14, 16])
    fit = finite_size_fit(L, 1 - 2.5 / L + 7.0 / L**2)
    assert fit.a == pytest.approx(-2.5, abs=1e-10)
    assert fit.b == pytest.approx(7.0, abs=1e-9)
    assert fit.rms_residual < 1e-12


def test_finite_size_fit_rejects_short_input():
    with pytest.raises(ValueError):
        finite_size_fit([10], [0.9])


def test_half_chain_ratio_matches_curve():
    spec = GoldenChainSpec(10, 0.9, "0", 1)
    curve = eigenstate_aee_curve(spec, LA_list=[5], threads=1)
    assert half_chain_ratio(10, 0.9, threads=1) == pytest.approx(curve.mean_aee[0] / curve.analytic_exact[0])
