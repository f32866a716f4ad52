//! Acceptance suite: one test per criterion, each printing a pass line
//! with its runtime. Tolerances are pinned in the assertions.

use std::collections::BTreeMap;
use std::sync::Arc;
use std::time::{Duration, Instant};

use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use groupoidal_core::algebra::GFunction;
use groupoidal_core::groupoid::{
    build_action_groupoid, build_cyclic_group, build_pair_groupoid, build_quantum_ratchet,
    build_symmetric_s3, FiniteGroupoid, ObjectId,
};
use groupoidal_core::kernels::{
    check_quasi_invariant, CompositeMeasure, GKernel, ModularFunction, ObjectMeasure,
    QuasiInvReading,
};
use groupoidal_core::linalg::{self, CMat, CVec};
use groupoidal_core::rep::{rebuild_from_pair, split_along_section, extend_from_isotropy, RepPair, Representation};
use groupoidal_core::tannaka;

type C = Complex64;

fn ratchet() -> Arc<FiniteGroupoid> {
    Arc::new(build_quantum_ratchet())
}

/// The builtin groupoids every bulk criterion runs over.
fn builtins() -> Vec<(&'static str, Arc<FiniteGroupoid>)> {
    vec![
        ("quantum-ratchet", ratchet()),
        ("pair:3", Arc::new(build_pair_groupoid(3).unwrap())),
        ("group:Z3", Arc::new(build_cyclic_group(3).unwrap())),
        ("group:Z4", Arc::new(build_cyclic_group(4).unwrap())),
        ("group:S3", Arc::new(build_symmetric_s3())),
        (
            "action:3cycle,3",
            Arc::new(build_action_groupoid(&[1, 2, 0], 3).unwrap()),
        ),
    ]
}

fn random_function(base: &Arc<FiniteGroupoid>, rng: &mut ChaCha8Rng) -> GFunction {
    let mut f = GFunction::zero(base.clone());
    for i in 0..base.num_morphisms() {
        f.set_idx(i, linalg::random_complex(rng));
    }
    f
}

fn random_real_function(base: &Arc<FiniteGroupoid>, rng: &mut ChaCha8Rng) -> GFunction {
    let mut f = GFunction::zero(base.clone());
    for i in 0..base.num_morphisms() {
        f.set_idx(i, C::new(rng.random_range(-1.0..1.0), 0.0));
    }
    f
}

fn indicator(base: &Arc<FiniteGroupoid>, i: usize) -> GFunction {
    GFunction::indicator(base.clone(), &base.morphism(i).clone()).unwrap()
}

fn finish(criterion: &str, start: Instant, budget: Duration) {
    let elapsed = start.elapsed();
    assert!(
        elapsed < budget,
        "criterion {criterion} exceeded its runtime budget: {elapsed:?} > {budget:?}"
    );
    println!("criterion {criterion}: PASS in {elapsed:?}");
}

// -------------------------------------------------------------------------
// 1. Quantum-ratchet fidelity
// -------------------------------------------------------------------------
#[test]
fn criterion_01_quantum_ratchet_fidelity() {
    let start = Instant::now();
    let g = build_quantum_ratchet();
    assert_eq!(g.num_morphisms(), 12);
    assert_eq!(g.num_objects(), 2);
    assert!(g.validate().is_valid());

    let expected_ids = [
        "+", "-", "α1", "α2", "α3", "β1", "β2", "β3", "σ+", "σ+2", "σ-", "σ-2",
    ];
    let ids: Vec<&str> = g.morphisms().iter().map(|m| m.as_str()).collect();
    assert_eq!(ids, expected_ids);

    // the full published inverse table
    let inverse_table = [
        ("+", "+"),
        ("β1", "α2"),
        ("α1", "β2"),
        ("-", "-"),
        ("σ+", "σ+2"),
        ("β2", "α1"),
        ("α2", "β1"),
        ("σ-", "σ-2"),
        ("σ+2", "σ+"),
        ("β3", "α3"),
        ("α3", "β3"),
        ("σ-2", "σ-"),
    ];
    for (m, inv) in inverse_table {
        assert_eq!(g.inverse(&m.into()).unwrap().as_str(), inv, "inverse of {m}");
    }

    // golden file: the emitted presentation is byte-stable
    let golden = include_str!("golden/quantum_ratchet.json");
    assert_eq!(groupoidal_core::io::groupoid_to_json(&g), golden.trim_end());

    finish("1 (quantum-ratchet fidelity)", start, Duration::from_secs(1));
}

// -------------------------------------------------------------------------
// 2. Convolution golden identity
// -------------------------------------------------------------------------
#[test]
fn criterion_02_convolution_golden_identity() {
    let start = Instant::now();
    let g = ratchet();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut max_residual = 0.0_f64;
    for _ in 0..50 {
        let f = random_function(&g, &mut rng);
        let h = random_function(&g, &mut rng);
        let val = |fun: &GFunction, id: &str| fun.get(&id.into()).unwrap();
        let expected = val(&f, "σ+") * val(&h, "σ+2")
            + val(&f, "σ+2") * val(&h, "σ+")
            + val(&f, "+") * val(&h, "+")
            + val(&f, "α1") * val(&h, "β2")
            + val(&f, "α2") * val(&h, "β1")
            + val(&f, "α3") * val(&h, "β3");
        let got = f.convolve(&h).unwrap().get(&"+".into()).unwrap();
        max_residual = max_residual.max((got - expected).norm());
    }
    assert!(max_residual < 1e-9, "max residual {max_residual}");
    finish("2 (convolution golden identity)", start, Duration::from_secs(1));
}

// -------------------------------------------------------------------------
// 3. Algebra laws
// -------------------------------------------------------------------------
#[test]
fn criterion_03_algebra_laws() {
    let start = Instant::now();
    for (name, g) in builtins() {
        let n = g.num_morphisms();
        // associativity on every basis triple
        let pairwise: Vec<Vec<GFunction>> = (0..n)
            .map(|a| {
                (0..n)
                    .map(|b| indicator(&g, a).convolve(&indicator(&g, b)).unwrap())
                    .collect()
            })
            .collect();
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    let left = pairwise[a][b].convolve(&indicator(&g, c)).unwrap();
                    let right = indicator(&g, a).convolve(&pairwise[b][c]).unwrap();
                    assert!(
                        left.approx_eq(&right, 1e-9),
                        "associativity fails on {name} at basis triple ({a}, {b}, {c})"
                    );
                }
            }
        }
    }
    // anti-homomorphism on 50 random pairs over the ratchet
    let g = ratchet();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..50 {
        let f = random_function(&g, &mut rng);
        let h = random_function(&g, &mut rng);
        let lhs = f.convolve(&h).unwrap().adjoint();
        let rhs = h.adjoint().convolve(&f.adjoint()).unwrap();
        assert!(lhs.approx_eq(&rhs, 1e-9));
    }
    finish("3 (algebra laws)", start, Duration::from_secs(10));
}

// -------------------------------------------------------------------------
// 4. Haar-system equivalence
// -------------------------------------------------------------------------

/// Associativity of ∗_λ over every basis triple, with a witness for the
/// first failure. Computed by raw convolution, independently of the
/// transversality scan over kernel coefficients.
fn haar_associative_on_basis(
    g: &Arc<FiniteGroupoid>,
    kernel: &GKernel,
) -> (bool, Option<(usize, usize, usize)>) {
    let n = g.num_morphisms();
    let pairwise: Vec<Vec<GFunction>> = (0..n)
        .map(|a| {
            (0..n)
                .map(|b| {
                    indicator(g, a)
                        .convolve_haar(&indicator(g, b), kernel)
                        .unwrap()
                })
                .collect()
        })
        .collect();
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                let left = pairwise[a][b]
                    .convolve_haar(&indicator(g, c), kernel)
                    .unwrap();
                let right = indicator(g, a)
                    .convolve_haar(&pairwise[b][c], kernel)
                    .unwrap();
                if !left.approx_eq(&right, 1e-9) {
                    return (false, Some((a, b, c)));
                }
            }
        }
    }
    (true, None)
}

#[test]
fn criterion_04_haar_system_equivalence() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for (name, g) in builtins() {
        let counting = GKernel::counting(g.clone());
        let scaled = counting.scaled(2.0).unwrap();
        let weights: BTreeMap<ObjectId, f64> = g
            .objects()
            .iter()
            .map(|o| (o.clone(), rng.random_range(0.2..2.0)))
            .collect();
        let source_weighted = GKernel::source_weighted(g.clone(), &weights).unwrap();
        // bump one coefficient: pick the first non-unit morphism
        let bump_idx = (0..g.num_morphisms())
            .find(|&m| g.unit_idx(g.rng_idx(m)) != m)
            .unwrap();
        let bump_obj = g.object(g.rng_idx(bump_idx)).clone();
        let bump_mor = g.morphism(bump_idx).clone();
        let mutant = counting.with_coeff(&bump_obj, &bump_mor, 2.0).unwrap();

        let kernels = [
            ("counting", &counting, true),
            ("scaled", &scaled, true),
            ("source-weighted", &source_weighted, true),
            ("mutant", &mutant, false),
        ];
        for (kname, kernel, expect_transverse) in kernels {
            let transverse_report = kernel.check_transverse();
            let transverse = transverse_report.is_transverse();
            let (associative, triple_witness) = haar_associative_on_basis(&g, kernel);
            assert_eq!(
                transverse, associative,
                "{name}/{kname}: transversality and associativity disagree"
            );
            assert_eq!(
                transverse, expect_transverse,
                "{name}/{kname}: unexpected transversality verdict"
            );
            if !transverse {
                assert!(
                    !transverse_report.violations.is_empty(),
                    "{name}/{kname}: missing transversality witness"
                );
                assert!(
                    triple_witness.is_some(),
                    "{name}/{kname}: missing associativity witness"
                );
            }
        }
    }
    finish("4 (haar-system equivalence)", start, Duration::from_secs(10));
}

// -------------------------------------------------------------------------
// 5. Quasi-invariance
// -------------------------------------------------------------------------

/// Both sides of the worked ratchet identity, expanded by hand from the
/// published tables: for each object the isotropy terms carry no
/// exponential factor and the cross terms carry e^{±(φ(+)−φ(−))}, with
/// the source-fiber coefficient of the inverted morphism.
fn ratchet_identity_oracle(
    f: &GFunction,
    kernel: &GKernel,
    t_plus: f64,
    t_minus: f64,
    phi_plus: f64,
    phi_minus: f64,
) -> (C, C) {
    let alphas = ["α1", "α2", "α3"];
    let betas = ["β1", "β2", "β3"];
    let sig_plus = ["+", "σ+", "σ+2"];
    let sig_minus = ["-", "σ-", "σ-2"];
    let t = |a: &str, m: &str| kernel.coeff(&a.into(), &m.into()).unwrap();
    let v = |m: &str| f.get(&m.into()).unwrap();

    let mut lhs = C::default();
    for i in 0..3 {
        lhs += C::new(t_plus, 0.0)
            * (C::new(t("+", alphas[i]), 0.0) * v(alphas[i])
                + C::new(t("+", sig_plus[i]), 0.0) * v(sig_plus[i]));
        lhs += C::new(t_minus, 0.0)
            * (C::new(t("-", betas[i]), 0.0) * v(betas[i])
                + C::new(t("-", sig_minus[i]), 0.0) * v(sig_minus[i]));
    }

    // inverses: α1⁻¹ = β2, α2⁻¹ = β1, α3⁻¹ = β3 and σ-powers swap
    let e_pm = (phi_plus - phi_minus).exp();
    let e_mp = (phi_minus - phi_plus).exp();
    let mut rhs = C::default();
    for i in 0..3 {
        // a = +, α = α_i, α⁻¹ = β_j with Δ(β_j) = e^{φ(+)−φ(−)}
        let beta_inv = ["β2", "β1", "β3"][i];
        rhs += C::new(t_plus * t("-", beta_inv) * e_pm, 0.0) * v(beta_inv).conj();
        // a = +, isotropy terms, Δ = 1
        let sig_inv = ["+", "σ+2", "σ+"][i];
        rhs += C::new(t_plus * t("+", sig_inv), 0.0) * v(sig_inv).conj();
        // a = -, α = β_i, α⁻¹ = α_j with Δ(α_j) = e^{φ(−)−φ(+)}
        let alpha_inv = ["α2", "α1", "α3"][i];
        rhs += C::new(t_minus * t("+", alpha_inv) * e_mp, 0.0) * v(alpha_inv).conj();
        let sig_inv = ["-", "σ-2", "σ-"][i];
        rhs += C::new(t_minus * t("-", sig_inv), 0.0) * v(sig_inv).conj();
    }
    (lhs, rhs)
}

#[test]
fn criterion_05_quasi_invariance() {
    let start = Instant::now();
    let g = ratchet();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for draw in 0..20 {
        // random potential, inversion-symmetric kernel, matched measure
        let phi_plus = rng.random_range(-1.0..1.0);
        let phi_minus = rng.random_range(-1.0..1.0);
        let mut phi = BTreeMap::new();
        phi.insert(ObjectId::from("+"), phi_plus);
        phi.insert(ObjectId::from("-"), phi_minus);
        let modular = ModularFunction::from_potential(g.clone(), &phi).unwrap();

        let mut coeffs = BTreeMap::new();
        let mut assigned = vec![f64::NAN; g.num_morphisms()];
        for m in 0..g.num_morphisms() {
            if assigned[m].is_nan() {
                let t = rng.random_range(0.2..1.5);
                assigned[m] = t;
                assigned[g.inv_idx(m)] = t;
            }
            coeffs.insert(
                (g.object(g.rng_idx(m)).clone(), g.morphism(m).clone()),
                assigned[m],
            );
        }
        let kernel = GKernel::new(g.clone(), &coeffs, true).unwrap();

        let scale = rng.random_range(0.5..2.0);
        let t_plus = scale * (-phi_plus).exp();
        let t_minus = scale * (-phi_minus).exp();
        let mut weights = BTreeMap::new();
        weights.insert(ObjectId::from("+"), t_plus);
        weights.insert(ObjectId::from("-"), t_minus);
        let measure = ObjectMeasure::new(g.clone(), &weights).unwrap();

        let f = random_real_function(&g, &mut rng);

        // the identity itself, against the hand-expanded oracle
        let (lhs, rhs) = ratchet_identity_oracle(&f, &kernel, t_plus, t_minus, phi_plus, phi_minus);
        let oracle_residual = (lhs - rhs).norm();
        assert!(
            oracle_residual < 1e-9,
            "draw {draw}: oracle residual {oracle_residual}"
        );

        let qi = check_quasi_invariant(&measure, &kernel, &modular, &f, QuasiInvReading::SourceFiber)
            .unwrap();
        assert!(qi.norm() < 1e-9, "draw {draw}: quasi-invariance residual {qi}");
        assert!(
            (qi - (lhs - rhs)).norm() < 1e-9,
            "draw {draw}: implementation disagrees with the oracle"
        );

        // Definition 2.8 form m(f) = m(f* Δ⁻¹) agrees on the same draw
        let composite = CompositeMeasure::new(measure.clone(), kernel.clone()).unwrap();
        let m_res = composite.symmetry_residual(&f, &modular).unwrap();
        assert!(m_res.norm() < 1e-9, "draw {draw}: composite residual {m_res}");
        assert!((m_res - qi).norm() < 1e-9, "draw {draw}: the two forms disagree");
    }
    finish("5 (quasi-invariance)", start, Duration::from_secs(2));
}

// -------------------------------------------------------------------------
// 6. Representation suite
// -------------------------------------------------------------------------

fn induced_rep(g: &Arc<FiniteGroupoid>, seed: u64) -> Representation {
    let anchor = g.objects()[0].clone();
    let section = g.section_omega(&anchor).unwrap();
    let iso = Arc::new(g.isotropy_group(&anchor).unwrap());
    let lambda = Representation::regular(&iso).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pair = RepPair::with_random_mu(g.clone(), anchor, lambda, &mut rng).unwrap();
    rebuild_from_pair(&pair, &section).unwrap()
}

fn check_decomposition(name: &str, rep: &Representation, seed: u64) {
    let dec = rep.decompose(seed).unwrap();
    let total: usize = dec.pieces.iter().map(|p| p.rep.common_dim().unwrap()).sum();
    assert_eq!(total, rep.common_dim().unwrap(), "{name}: dimension accounting");
    for p in &dec.pieces {
        assert!(p.rep.is_representation(), "{name}: piece not functorial");
        assert!(p.rep.is_unitary(), "{name}: piece not unitary");
        assert_eq!(
            p.rep.commutant_dimension().unwrap(),
            1,
            "{name}: piece has a non-scalar commutant"
        );
    }
    let sum = dec.assemble().unwrap();
    assert!(
        rep.equivalence(&sum, seed + 1).unwrap().is_equivalent(),
        "{name}: sum of pieces is not equivalent to the input"
    );
}

#[test]
fn criterion_06_representation_suite() {
    let start = Instant::now();

    // regular representation of Z3 against the discrete-Fourier oracle
    let z3 = Arc::new(build_cyclic_group(3).unwrap());
    let reg = Representation::regular(&z3).unwrap();
    let dec = reg.decompose(6).unwrap();
    assert_eq!(dec.pieces.len(), 3);
    let mut found = [false; 3];
    for p in &dec.pieces {
        assert_eq!(p.rep.common_dim().unwrap(), 1);
        for k in 0..3 {
            let matches = (0..3).all(|j| {
                let theta = 2.0 * std::f64::consts::PI * (k * j) as f64 / 3.0;
                (p.rep.mat_idx(j)[(0, 0)] - C::from_polar(1.0, theta)).norm() < 1e-7
            });
            if matches {
                assert!(!found[k], "character {k} found twice");
                found[k] = true;
            }
        }
    }
    assert!(found.iter().all(|&b| b), "decomposition must match the DFT characters");

    // decomposition contract on a spread of inputs
    for (name, rep, seed) in [
        ("Z2 regular", Representation::regular(&Arc::new(build_cyclic_group(2).unwrap())).unwrap(), 61),
        ("Z4 regular", Representation::regular(&Arc::new(build_cyclic_group(4).unwrap())).unwrap(), 62),
        ("S3 regular", Representation::regular(&Arc::new(build_symmetric_s3())).unwrap(), 63),
        ("ratchet induced", induced_rep(&ratchet(), 64), 65),
    ] {
        check_decomposition(name, &rep, seed);
    }

    // the double copy of an irreducible has a 4-dimensional commutant
    let chi = {
        let dec = reg.decompose(66).unwrap();
        dec.pieces[1].rep.clone()
    };
    let double = chi.direct_sum(&chi).unwrap();
    assert_eq!(double.commutant_dimension().unwrap(), 4);
    check_decomposition("χ ⊕ χ", &double, 67);

    finish("6 (representation suite)", start, Duration::from_secs(5));
}

// -------------------------------------------------------------------------
// 7. Splitting round-trips
// -------------------------------------------------------------------------
#[test]
fn criterion_07_splitting_roundtrips() {
    let start = Instant::now();
    for (name, g) in builtins() {
        if !g.is_connected() {
            continue;
        }
        let anchor = g.objects()[0].clone();
        let section = g.section_omega(&anchor).unwrap();

        let induced_plain = {
            let iso = Arc::new(g.isotropy_group(&anchor).unwrap());
            let lambda = Representation::regular(&iso).unwrap();
            let mu = (0..g.num_objects())
                .map(|_| linalg::identity(lambda.common_dim().unwrap()))
                .collect();
            let pair = RepPair::new(g.clone(), anchor.clone(), lambda, mu).unwrap();
            rebuild_from_pair(&pair, &section).unwrap()
        };
        let reps = vec![
            ("trivial", Representation::trivial(g.clone())),
            ("induced-generic", induced_rep(&g, 71)),
            ("induced-plain", induced_plain),
        ];
        assert!(reps.len() >= 3);
        for (rname, rep) in reps {
            assert!(rep.is_representation() && rep.is_unitary(), "{name}/{rname}");
            let pair = split_along_section(&rep, &section).unwrap();
            let back = rebuild_from_pair(&pair, &section).unwrap();
            assert!(
                back.approx_eq(&rep, 1e-9),
                "{name}/{rname}: rebuild ∘ split is not the identity"
            );
            let pair2 = split_along_section(&back, &section).unwrap();
            assert!(
                pair.approx_eq(&pair2, 1e-9),
                "{name}/{rname}: split ∘ rebuild is not the identity"
            );
        }

        // extension from a non-anchor isotropy group restricts to its input
        let far = g.objects().last().unwrap().clone();
        let iso_far = Arc::new(g.isotropy_group(&far).unwrap());
        let lp = Representation::regular(&iso_far).unwrap();
        let omega = section.omega(&far).unwrap().clone();
        let ext = extend_from_isotropy(&g, &lp, &omega, &section).unwrap();
        assert!(ext.is_representation() && ext.is_unitary(), "{name}: extension");
        let restricted = ext.restrict_to_isotropy(&far).unwrap();
        assert!(
            restricted.approx_eq(&lp, 1e-9),
            "{name}: restriction of the extension differs from the input"
        );
    }

    // the induced 3-dimensional ratchet representation specifically
    let g = ratchet();
    let section = g.section_omega(&"+".into()).unwrap();
    let rep = induced_rep(&g, 72);
    assert_eq!(rep.common_dim().unwrap(), 3);
    let pair = split_along_section(&rep, &section).unwrap();
    let back = rebuild_from_pair(&pair, &section).unwrap();
    assert!(back.approx_eq(&rep, 1e-9));

    finish("7 (splitting round-trips)", start, Duration::from_secs(5));
}

// -------------------------------------------------------------------------
// 8. Mean-value lemmas
// -------------------------------------------------------------------------

fn s3_sign_character(s3: &Arc<FiniteGroupoid>) -> Representation {
    let mut dims = BTreeMap::new();
    dims.insert(s3.objects()[0].clone(), 1);
    let mut mats = BTreeMap::new();
    for m in s3.morphisms() {
        // parity from the one-line notation pXYZ
        let digits: Vec<u32> = m.as_str()[1..].chars().map(|c| c.to_digit(10).unwrap()).collect();
        let mut inversions = 0;
        for i in 0..3 {
            for j in (i + 1)..3 {
                if digits[i] > digits[j] {
                    inversions += 1;
                }
            }
        }
        let sign = if inversions % 2 == 0 { 1.0 } else { -1.0 };
        mats.insert(m.clone(), CMat::from_element(1, 1, C::new(sign, 0.0)));
    }
    Representation::new(s3.clone(), &dims, &mats).unwrap()
}

fn character(zn: &Arc<FiniteGroupoid>, k: usize) -> Representation {
    let n = zn.num_morphisms();
    let mut dims = BTreeMap::new();
    dims.insert(zn.objects()[0].clone(), 1);
    let mut mats = BTreeMap::new();
    for (j, m) in zn.morphisms().iter().enumerate() {
        let theta = 2.0 * std::f64::consts::PI * (k * j) as f64 / n as f64;
        mats.insert(m.clone(), CMat::from_element(1, 1, C::from_polar(1.0, theta)));
    }
    Representation::new(zn.clone(), &dims, &mats).unwrap()
}

#[test]
fn criterion_08_mean_value_lemmas() {
    let start = Instant::now();
    let z4 = Arc::new(build_cyclic_group(4).unwrap());
    let mut rng = ChaCha8Rng::seed_from_u64(8);

    // i): M(1) = 1
    let one = GFunction::constant(z4.clone(), C::new(1.0, 0.0));
    assert!((tannaka::mean_value(&one).unwrap() - C::new(1.0, 0.0)).norm() < 1e-12);

    // ii): positivity and definiteness on nonnegative functions
    let mut nonneg = GFunction::zero(z4.clone());
    for i in 0..4 {
        nonneg.set_idx(i, C::new(rng.random_range(0.0..2.0), 0.0));
    }
    let m = tannaka::mean_value(&nonneg).unwrap();
    assert!(m.im.abs() < 1e-12 && m.re >= 0.0);
    let supported = GFunction::indicator(z4.clone(), &"g2".into()).unwrap();
    assert!(tannaka::mean_value(&supported).unwrap().norm() > 0.0);

    // iii): |M(f)| ≤ M(|f|)
    for _ in 0..20 {
        let f = random_function(&z4, &mut rng);
        let mut abs_f = GFunction::zero(z4.clone());
        for i in 0..4 {
            abs_f.set_idx(i, C::new(f.get_idx(i).norm(), 0.0));
        }
        let lhs = tannaka::mean_value(&f).unwrap().norm();
        let rhs = tannaka::mean_value(&abs_f).unwrap().re;
        assert!(lhs <= rhs + 1e-12);
    }

    // iv): two-sided translation invariance and adjoint invariance (real f)
    for _ in 0..10 {
        let f = random_function(&z4, &mut rng);
        let m = tannaka::mean_value(&f).unwrap();
        for x in z4.morphisms() {
            let lt = tannaka::mean_value(&tannaka::left_translate(&f, x).unwrap()).unwrap();
            let rt = tannaka::mean_value(&tannaka::right_translate(&f, x).unwrap()).unwrap();
            assert!((lt - m).norm() < 1e-12 && (rt - m).norm() < 1e-12);
        }
        let fr = random_real_function(&z4, &mut rng);
        let mr = tannaka::mean_value(&fr).unwrap();
        let ma = tannaka::mean_value(&fr.adjoint()).unwrap();
        assert!((mr - ma).norm() < 1e-12);
    }

    // dichotomy: the trivial case is exact up to rounding, the nontrivial
    // irreducibles of Z2, Z3, Z4 and the sign character of S3 average to 0
    for (group, n) in [(Arc::new(build_cyclic_group(2).unwrap()), 2usize),
                       (Arc::new(build_cyclic_group(3).unwrap()), 3),
                       (z4.clone(), 4)] {
        let trivial = Representation::trivial(group.clone());
        let rep = tannaka::check_mv_lemma(&trivial, 20, 80).unwrap();
        assert_eq!(rep.case, tannaka::MvCase::Trivial);
        assert!(rep.max_residual < 1e-12, "trivial case residual {}", rep.max_residual);
        for k in 1..n {
            let chi = character(&group, k);
            let rep = tannaka::check_mv_lemma(&chi, 20, 81).unwrap();
            assert_eq!(rep.case, tannaka::MvCase::Nontrivial);
            assert!(rep.max_residual < 1e-9);
        }
    }
    let s3 = Arc::new(build_symmetric_s3());
    let sign = s3_sign_character(&s3);
    assert!(sign.is_irreducible().unwrap());
    let rep = tannaka::check_mv_lemma(&sign, 20, 82).unwrap();
    assert_eq!(rep.case, tannaka::MvCase::Nontrivial);
    assert!(rep.max_residual < 1e-9);

    // projector identity over 100 random vector pairs on a reducible input
    let reg = Representation::regular(&Arc::new(build_cyclic_group(3).unwrap())).unwrap();
    for _ in 0..100 {
        let u: CVec = linalg::random_vector(&mut rng, 3);
        let v: CVec = linalg::random_vector(&mut rng, 3);
        assert!(tannaka::check_dec_lemma(&reg, &u, &v).unwrap() < 1e-9);
    }

    finish("8 (mean-value lemmas)", start, Duration::from_secs(5));
}

// -------------------------------------------------------------------------
// 9. Reconstruction at desk scale
// -------------------------------------------------------------------------
#[test]
fn criterion_09_reconstruction_theorem() {
    let start = Instant::now();
    let g = ratchet();
    let (family, separation, _attempts) = tannaka::separating_family(&g, 9).unwrap();
    assert!(separation.separates(), "family must separate all morphisms");

    let report = tannaka::check_reconstruction(&family).unwrap();
    assert!(report.all_ok(), "failures: {:?}", report.failures);
    assert_eq!(report.homomorphism_pairs, 144, "all ordered pairs scanned");
    assert!(report.homomorphism_max_residual < 1e-9);
    assert!(report.units_ok);
    assert!(report.inverses_ok);
    assert!(report.injective);
    assert_eq!(report.distinct_images, 66, "all 12 images pairwise distinct");
    assert!(report.ideal_condition_ok);

    finish("9 (reconstruction theorem)", start, Duration::from_secs(10));
}

// -------------------------------------------------------------------------
// 10. Abelian duality enumeration
// -------------------------------------------------------------------------
#[test]
fn criterion_10_abelian_duality() {
    let start = Instant::now();
    for (n, seed) in [(2usize, 101u64), (3, 102), (4, 103)] {
        let g = Arc::new(build_cyclic_group(n).unwrap());
        let report = tannaka::abelian_tannaka_surjectivity(&g, seed).unwrap();
        assert_eq!(report.num_characters, n);
        assert_eq!(report.num_assignments, n, "Z{n}: assignment count");
        assert!(report.every_assignment_is_an_evaluation, "Z{n}");
        assert!(report.every_evaluation_is_an_assignment, "Z{n}");
        assert!(report.surjective());
    }
    finish("10 (abelian duality)", start, Duration::from_secs(1));
}
