use algpaths::linalg::{operator_norm, ComplexMatrix};
use algpaths::paths::*;
use algpaths::sampling::Sampler;
use algpaths::spectral::{decompose, AlgebraicElement, SpectrumSpec};
use algpaths::tolerances::Tolerances;

fn close_elements(spec: &SpectrumSpec, dim: usize, self_adjoint: bool, gap: f64, seed: u64) -> (AlgebraicElement, AlgebraicElement) {
    let tol = Tolerances::default();
    let mut s = Sampler::new(seed);
    let (a0, a1) = s.close_pair(spec, dim, self_adjoint, gap, 4.0);
    (decompose(&a0, spec, &tol).unwrap(), decompose(&a1, spec, &tol).unwrap())
}

#[test]
fn exchange_relations_on_random_pairs() {
    let tol = Tolerances::default();
    let mut s = Sampler::new(41);
    for trial in 0..100 {
        let dim = 2 + trial % 5;
        let rank = 1 + trial % (dim - 1);
        let (e0, e1) = s.projection_pair(dim, rank, 0.3, trial % 2 == 0);
        let g = exchange_idempotent(&e0, &e1, &tol).unwrap();
        let defects = ExchangeDefects::measure(&e0, &e1, &g);
        assert!(defects.worst() < 1e-10, "trial {trial}: {defects:?}");
        let np = nilpotent_generators(&e0, &e1, &tol).unwrap();
        assert!(np.square_defect() < 1e-10);
        for d in np.relation_defects(&e0, &e1) {
            assert!(d < 1e-10, "trial {trial}: {d}");
        }
        let u = idempotent_similarity(&e0, &e1, &tol).unwrap();
        let u_inv = algpaths::linalg::mat_inverse(&u).unwrap();
        assert!(operator_norm(&(&(&(&u * &e0) * &u_inv) - &e1)) < 1e-9);
        let path = two_segment_path(&e0, &e1, &tol).unwrap();
        assert!(path.max_relative_membership() < 1e-9);
    }
}

#[test]
fn exp_and_unitary_paths_reach_target() {
    let tol = Tolerances::default();
    for (k, roots) in [vec![0.0, 1.0], vec![0.0, 1.0, 2.0], vec![-1.0, 0.5, 2.0, 4.0]].into_iter().enumerate() {
        let spec = SpectrumSpec::real(&roots).unwrap();
        for seed in 0..10 {
            let (a0, a1) = close_elements(&spec, 5, false, 0.05, 100 * k as u64 + seed);
            let cert = ep_similarity(&a0, &a1, &tol).unwrap();
            let path = exp_path(&a0, &cert, &tol).unwrap();
            assert!(operator_norm(&(&path.end() - a1.matrix())) < 1e-9);
            assert!(path.max_relative_membership() < 1e-9);

            let (h0, h1) = close_elements(&spec, 5, true, 0.05, 1000 + 100 * k as u64 + seed);
            let cert = unitary_similarity(&h0, &h1, &tol).unwrap();
            assert!(cert.unitary_defect() < 1e-9);
            assert!(cert.generator_hermitian_defect() < 1e-9);
            let path = exp_path(&h0, &cert, &tol).unwrap();
            assert!(operator_norm(&(&path.end() - h1.matrix())) < 1e-9);
            assert!(path.max_hermitian_defect() < 1e-9);
        }
    }
}

#[test]
fn ladder_on_random_close_pairs() {
    let tol = Tolerances::default();
    let spec = SpectrumSpec::real(&[0.0, 1.0, 2.0]).unwrap();
    for seed in 0..20 {
        let (a0, a1) = close_elements(&spec, 5, false, 0.02 * spec.min_gap(), seed);
        let ladder = polygonal_ladder(&a0, &a1, &tol).unwrap();
        assert!(ladder.final_defect() < 1e-7);
        assert!(ladder.max_interpolation_defect(101) < 1e-8);
        let path = polygonal_path(&ladder, &tol).unwrap();
        assert_eq!(path.len(), 3);
        assert!(operator_norm(&(&path.end() - a1.matrix())) < 1e-7);
    }
}

#[test]
fn cubic_candidate_two_and_three_roots() {
    let tol = Tolerances::default();
    let spec2 = SpectrumSpec::real(&[0.0, 1.0]).unwrap();
    let spec3 = SpectrumSpec::real(&[0.0, 1.0, 2.0]).unwrap();
    for seed in 0..10 {
        let (a0, a1) = close_elements(&spec2, 4, false, 0.05, seed);
        let r = cubic_candidate_path(&a0, &a1, &tol).unwrap();
        assert!(r.asserted && r.max_residual < 1e-9);
        let (b0, b1) = close_elements(&spec3, 4, false, 0.05, 50 + seed);
        let r = cubic_candidate_path(&b0, &b1, &tol).unwrap();
        assert!(!r.asserted);
        assert!(r.end_error < 1e-9);
        assert_eq!(r.residual_curve().len(), 101);
    }
}

#[test]
fn chained_links() {
    let tol = Tolerances::default();
    let spec = SpectrumSpec::real(&[0.0, 1.0, 2.0]).unwrap();
    let mut s = Sampler::new(9);
    let a0 = s.algebraic(&spec, 4, false, 3.0).matrix;
    let a1 = s.similar_nearby(&a0, 0.05, false);
    let a2 = s.similar_nearby(&a1, 0.05, false);
    let way: Vec<AlgebraicElement> = [a0, a1, a2].iter().map(|m| decompose(m, &spec, &tol).unwrap()).collect();
    let exp = chain_path(&way, ChainMode::Exp, &tol).unwrap();
    let cert = exp.certificate.unwrap();
    assert_eq!(cert.generators.len(), 2);
    assert!(operator_norm(&(&cert.conjugate(way[0].matrix()) - way[2].matrix())) < 1e-8);
    let full = exp_path(&way[0], &cert, &tol).unwrap();
    assert!(operator_norm(&(&full.end() - way[2].matrix())) < 1e-8);
    let poly = chain_path(&way, ChainMode::Polygonal, &tol).unwrap();
    assert_eq!(poly.path.len(), 2 * 3);
    let far = ComplexMatrix::from_real_diag(&[2.0, 1.0, 0.0, 0.0]);
    let bad = vec![way[0].clone(), decompose(&far, &spec, &tol).unwrap()];
    assert!(matches!(chain_path(&bad, ChainMode::Exp, &tol), Err(PathError::LinkTooFar { index: 0, .. })));
}

#[test]
fn distance_from_start_shrinks_with_gap() {
    let tol = Tolerances::default();
    let spec = SpectrumSpec::real(&[0.0, 1.0, 3.0]).unwrap();
    let mut s = Sampler::new(77);
    let a0 = s.algebraic(&spec, 4, false, 3.0).matrix;
    let e0 = decompose(&a0, &spec, &tol).unwrap();
    let mut prev = f64::INFINITY;
    for k in 1..=6 {
        let gap = 10f64.powi(-k);
        let a1 = s.similar_nearby(&a0, gap, false);
        let e1 = decompose(&a1, &spec, &tol).unwrap();
        let cert = ep_similarity(&e0, &e1, &tol).unwrap();
        let d = exp_path(&e0, &cert, &tol).unwrap().max_distance_from_start();
        assert!(d <= 1.1 * prev, "gap {gap}: {d} vs {prev}");
        prev = d;
    }
    assert!(prev < 1e-5);
}
