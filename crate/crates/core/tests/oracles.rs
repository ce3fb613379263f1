//! Independent reference computations checked against the library.

use std::f64::consts::PI;

use circwave_core::measures::{ggm, ggm_analytic_lr, three_mode_nu, BipartitionStrategy};
use circwave_core::symplectic::{symplectic_form, GaussianState, ModeSet};
use circwave_core::waveguide::{
    circulant_spectrum, coupling_matrix, evolve_waveguide, waveguide_propagator, CouplingProfile, RangeStrengths,
    SqueezedInputSpec,
};
use nalgebra::{Complex, DMatrix, SymmetricEigen};

type C = Complex<f64>;

fn profile(modes: usize, n: Vec<f64>, j: f64) -> CouplingProfile {
    CouplingProfile::new(RangeStrengths::new(modes, n).unwrap(), j).unwrap()
}

fn max_abs_diff(a: &DMatrix<f64>, b: &DMatrix<f64>) -> f64 {
    (a - b).amax()
}

/// `T† L† exp(−iKH) L T` with `H = ½ diag(A, Aᵀ)`, built literally and
/// exponentiated with a general (Padé) matrix exponential.
fn literal_propagator(a: &DMatrix<f64>) -> DMatrix<f64> {
    let n = a.nrows();
    let m = 2 * n;
    let mut t = DMatrix::<C>::zeros(m, m);
    for j in 1..=m {
        for k in 1..=m {
            if k == 2 * j - 1 || k + m == 2 * j {
                t[(j - 1, k - 1)] = C::new(1.0, 0.0);
            }
        }
    }
    let r = 1.0 / 2f64.sqrt();
    let mut l = DMatrix::<C>::zeros(m, m);
    let mut k = DMatrix::<C>::zeros(m, m);
    let mut h = DMatrix::<C>::zeros(m, m);
    for i in 0..n {
        l[(i, i)] = C::new(r, 0.0);
        l[(i, i + n)] = C::new(0.0, r);
        l[(i + n, i)] = C::new(r, 0.0);
        l[(i + n, i + n)] = C::new(0.0, -r);
        k[(i, i)] = C::new(1.0, 0.0);
        k[(i + n, i + n)] = C::new(-1.0, 0.0);
        for j in 0..n {
            h[(i, j)] = C::new(0.5 * a[(i, j)], 0.0);
            h[(i + n, j + n)] = C::new(0.5 * a[(j, i)], 0.0);
        }
    }
    let e = (k * h * C::new(0.0, -1.0)).exp();
    let s = t.adjoint() * l.adjoint() * e * l * t;
    assert!(s.iter().all(|z| z.im.abs() < 1e-10), "propagator is not real");
    s.map(|z| z.re)
}

#[test]
fn propagator_matches_literal_construction() {
    let cases = [
        (3, vec![1.0], 1.4),
        (4, vec![1.0, 0.0], 0.7),
        (4, vec![1.0, 1.0], PI / 2.0),
        (5, vec![1.0, 0.3], 2.9),
        (6, vec![1.0, 1.7, 0.4], 5.1),
        (7, vec![1.0, 1.0, 1.0], 0.25),
    ];
    for (n, strengths, j) in cases {
        let p = profile(n, strengths, j);
        let expected = literal_propagator(coupling_matrix(&p).matrix());
        let got = waveguide_propagator(&p).unwrap();
        let diff = max_abs_diff(got.matrix(), &expected);
        assert!(diff < 1e-10, "N={n} J={j}: {diff:e}");
    }
}

/// Moduli of the eigenvalues of `MΞ`, one per ± pair, descending.
fn schur_symplectic_eigenvalues(cov: &DMatrix<f64>) -> Vec<f64> {
    let n = cov.nrows() / 2;
    let m = symplectic_form(n).unwrap().matrix().clone();
    let mut moduli: Vec<f64> = (m * cov).complex_eigenvalues().iter().map(|z| z.norm()).collect();
    moduli.sort_by(|a, b| b.total_cmp(a));
    moduli.chunks(2).map(|p| 0.5 * (p[0] + p[1])).collect()
}

#[test]
fn symplectic_eigenvalues_match_eigenvalue_moduli() {
    // thermal ⊗ squeezed ⊗ correlated mixed pair
    let mut cov = DMatrix::<f64>::zeros(8, 8);
    cov[(0, 0)] = 1.3;
    cov[(1, 1)] = 1.3;
    cov[(2, 2)] = 0.5 * 3f64.exp();
    cov[(3, 3)] = 0.5 * (-3f64).exp();
    let block = [[2.0, 0.3, 1.1, 0.0], [0.3, 1.5, 0.0, -0.9], [1.1, 0.0, 1.8, 0.2], [0.0, -0.9, 0.2, 2.2]];
    for (i, row) in block.iter().enumerate() {
        for (j, v) in row.iter().enumerate() {
            cov[(4 + i, 4 + j)] = *v;
        }
    }
    let state = GaussianState::new(cov.clone()).unwrap();
    let got = state.symplectic_eigenvalues().unwrap();
    let expected = schur_symplectic_eigenvalues(&cov);
    for (g, e) in got.iter().zip(&expected) {
        assert!((g - e).abs() < 1e-10, "{got:?} vs {expected:?}");
    }

    let evolved =
        evolve_waveguide(&profile(6, vec![1.0, 0.5, 0.2], 2.3), &SqueezedInputSpec::new(1.2, 0.4).unwrap()).unwrap();
    for k in 1..=6 {
        let mut pair = vec![k, k % 6 + 1];
        pair.sort_unstable();
        let reduced = evolved.reduce(&ModeSet::new(pair).unwrap()).unwrap();
        let got = reduced.symplectic_eigenvalues().unwrap();
        let expected = schur_symplectic_eigenvalues(reduced.covariance());
        for (g, e) in got.iter().zip(&expected) {
            assert!((g - e).abs() < 1e-9, "{got:?} vs {expected:?}");
        }
    }
}

#[test]
fn circulant_spectrum_matches_dense_eigensolver() {
    let cases = [
        (4, vec![1.0, 0.0], 1.0),
        (4, vec![1.0, 1.0], 1.0),
        (9, vec![1.0, 0.7, 2.0, 0.1], 1.3),
        (12, vec![1.0, 1.0, 0.5, 0.5, 0.2, 1.9], 0.8),
        (40, vec![1.0], 10.0),
    ];
    for (n, strengths, j) in cases {
        let a = coupling_matrix(&profile(n, strengths, j));
        let mut got = circulant_spectrum(&a);
        let mut dense: Vec<f64> = SymmetricEigen::new(a.matrix().clone()).eigenvalues.iter().copied().collect();
        got.sort_by(f64::total_cmp);
        dense.sort_by(f64::total_cmp);
        for (g, d) in got.iter().zip(&dense) {
            assert!((g - d).abs() < 1e-10, "N={n}: {got:?} vs {dense:?}");
        }
    }
    let nn = circulant_spectrum(&coupling_matrix(&profile(4, vec![1.0, 0.0], 1.0)));
    for (g, e) in nn.iter().zip([2.0, 0.0, -2.0, 0.0]) {
        assert!((g - e).abs() < 1e-12);
    }
    let complete = circulant_spectrum(&coupling_matrix(&profile(4, vec![1.0, 1.0], 1.0)));
    for (g, e) in complete.iter().zip([3.0, -1.0, -1.0, -1.0]) {
        assert!((g - e).abs() < 1e-12);
    }
}

/// Single-mode symplectic eigenvalues of the three-mode ring, written out
/// from the closed form with the roots taken of the positive radicands.
fn three_mode_reference(j: f64, s: f64) -> (f64, f64) {
    let base = 57.0 + 24.0 * (2.0 * s).cosh();
    let sh2 = s.sinh() * s.sinh();
    let v1 = (base - 16.0 * sh2 * ((1.5 * j).cos() + 2.0 * (3.0 * j).cos())).sqrt() / 18.0;
    let v2 = (base - 8.0 * sh2 * (5.0 * (1.5 * j).cos() + (3.0 * j).cos())).sqrt() / 18.0;
    (v1, v2)
}

#[test]
fn three_mode_reductions_match_closed_form() {
    for (j, s) in [(1.4, 1.0), (0.3, 0.5), (2.0, 2.0), (3.9, 1.0)] {
        let state = evolve_waveguide(&profile(3, vec![1.0], j), &SqueezedInputSpec::new(s, 0.0).unwrap()).unwrap();
        let nu = |k: usize| state.reduce(&ModeSet::new(vec![k]).unwrap()).unwrap().symplectic_eigenvalues().unwrap()[0];
        let (v1, v2) = three_mode_reference(j, s);
        assert!((nu(1) - v1).abs() < 1e-8, "J={j}: {} vs {v1}", nu(1));
        assert!((nu(2) - v2).abs() < 1e-8, "J={j}: {} vs {v2}", nu(2));
        assert!((nu(3) - v2).abs() < 1e-8);
        let (l1, l2) = three_mode_nu(j, s);
        assert!((l1 - v1).abs() < 1e-14 && (l2 - v2).abs() < 1e-14);
    }
    // the fidelity is largest for the least mixed mode
    for j in [0.4, 1.4, 2.5, 3.9] {
        let (v1, v2) = three_mode_reference(j, 1.0);
        let g = 1.0 - 2.0 / (1.0 + 2.0 * v1.min(v2));
        let state = evolve_waveguide(&profile(3, vec![1.0], j), &SqueezedInputSpec::new(1.0, 0.0).unwrap()).unwrap();
        let numeric = ggm(&state, BipartitionStrategy::FullEnumeration).unwrap().value;
        assert!((g - numeric).abs() < 1e-8, "J={j}: {g} vs {numeric}");
        if j == 1.4 {
            assert!((g - 0.2).abs() < 0.01, "{g}");
        }
    }
}

/// `ν` of the all-equal ring, with the coefficient polynomials expanded.
fn all_equal_reference_nu(n: usize, j: f64, s: f64) -> f64 {
    let n = n as f64;
    let f1 = n.powi(4) - 4.0 * n.powi(2) + 12.0;
    let f2 = n.powi(2) - 4.0;
    let f3 = n.powi(2) - 3.0;
    let inner = f1 / 4.0 - 2.0 * s.sinh().powi(2) * (f2 * (j * n / 2.0).cos() + (j * n).cos()) + f3 * (2.0 * s).cosh();
    inner.sqrt() / n.powi(2)
}

#[test]
fn four_mode_complete_ring_value() {
    let nu = all_equal_reference_nu(4, PI / 2.0, 1.0);
    assert!((nu - 0.71341).abs() < 1e-5, "{nu}");
    let expected = 1.0 - 2.0 / (1.0 + 2.0 * nu);
    assert!((expected - 0.1759).abs() < 1e-4);
    let state =
        evolve_waveguide(&profile(4, vec![1.0, 1.0], PI / 2.0), &SqueezedInputSpec::new(1.0, 0.0).unwrap()).unwrap();
    let numeric = ggm(&state, BipartitionStrategy::FullEnumeration).unwrap();
    assert!((numeric.value - expected).abs() < 1e-10);
    assert!((ggm_analytic_lr(4, PI / 2.0, 1.0).unwrap() - expected).abs() < 1e-14);
    let largest = state.reduce(&ModeSet::new(vec![2]).unwrap()).unwrap().symplectic_eigenvalues().unwrap()[0];
    assert!((largest - nu).abs() < 1e-10);
}

#[test]
fn all_equal_closed_form_matches_pipeline_off_grid() {
    for n in [4, 5, 8, 11] {
        for (j, s) in [(0.123, 0.7), (1.9, 1.5), (7.7, 0.2)] {
            let strengths = RangeStrengths::all_equal(n).unwrap();
            let state = evolve_waveguide(
                &CouplingProfile::new(strengths, j).unwrap(),
                &SqueezedInputSpec::new(s, 0.0).unwrap(),
            )
            .unwrap();
            let numeric = ggm(&state, BipartitionStrategy::FullEnumeration).unwrap().value;
            let reference = 1.0 - 2.0 / (1.0 + 2.0 * all_equal_reference_nu(n, j, s));
            assert!((numeric - reference).abs() < 1e-9, "N={n} J={j}: {numeric} vs {reference}");
        }
    }
}

/// Breached GGM of the all-equal ring from the Fourier series of one period:
/// Gaussian smearing damps harmonic `k` by `exp(−(2πkσ/P)²/2)`.
fn breached_reference(n: usize, s: f64, sigma: f64) -> f64 {
    let samples = 2048;
    let period = 4.0 * PI / n as f64;
    let g: Vec<f64> =
        (0..samples).map(|i| ggm_analytic_lr(n, period * i as f64 / samples as f64, s).unwrap()).collect();
    (1..samples / 2)
        .map(|k| {
            let (mut re, mut im) = (0.0, 0.0);
            for (i, v) in g.iter().enumerate() {
                let phase = 2.0 * PI * (k * i) as f64 / samples as f64;
                re += v * phase.cos();
                im -= v * phase.sin();
            }
            let power = (re * re + im * im) / (samples * samples) as f64;
            let damp = (-(2.0 * PI * k as f64 * sigma / period).powi(2)).exp();
            2.0 * power * damp
        })
        .sum()
}

#[test]
fn breached_ggm_matches_fourier_reference() {
    use circwave_core::disorder::{breached, breached_ggm, DisorderScheme, QuenchedSettings};
    use circwave_core::measures::GgmCurve;
    let fine = QuenchedSettings { scheme: DisorderScheme::GaussHermite { order: 256 }, ..QuenchedSettings::default() };
    for n in [4, 6, 8, 10] {
        for sigma in [0.1, 0.3, 0.5, 1.0] {
            let reference = breached_reference(n, 1.0, sigma);
            let curve = GgmCurve::all_equal(n, 1.0).unwrap();
            let got = breached(&curve, sigma, &fine).unwrap();
            assert!((got - reference).abs() <= 1e-6 * reference + 1e-14, "N={n} σ={sigma}: {got:e} vs {reference:e}");
            if n as f64 * sigma <= 5.0 {
                let default = breached_ggm(n, 1.0, sigma).unwrap();
                assert!(
                    (default - reference).abs() <= 1e-6 * reference,
                    "N={n} σ={sigma}: {default:e} vs {reference:e}"
                );
            }
        }
    }
}
