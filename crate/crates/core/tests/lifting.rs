use algpaths::lifting::{
    degenerating_twist, flip_example, lift_family, lift_family_selfadjoint, lift_family_with_kernel, local_lift, AnalyticFamily, LiftError,
    QuotientModel,
};
use algpaths::linalg::{operator_norm, Complex64, ComplexMatrix};
use algpaths::sampling::Sampler;
use algpaths::spectral::{riesz_partition, PartitionDefects, SpectrumSpec};
use algpaths::tolerances::Tolerances;

fn c(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

fn real_grid(points: usize, half_width: f64) -> Vec<f64> {
    (0..points).map(|k| -half_width + 2.0 * half_width * k as f64 / (points - 1) as f64).collect()
}

#[test]
fn kernel_elements_are_nilpotent() {
    let model = QuotientModel::plain(vec![2, 1, 3]).unwrap();
    let mut s = Sampler::new(11);
    for _ in 0..100 {
        let k = model.random_kernel_element(&mut s);
        assert_eq!(k.powi(3).max_abs(), 0.0);
    }
}

#[test]
fn projection_is_multiplicative() {
    let model = QuotientModel::new(vec![1, 2, 1], false, degenerating_twist(0.7)).unwrap();
    let mut s = Sampler::new(12);
    for k in 0..200 {
        let lambda = Complex64::from_polar(0.5, k as f64);
        let x = model.random_algebra_element(&mut s);
        let y = model.random_algebra_element(&mut s);
        let lhs = model.project(&(&x * &y), lambda).unwrap();
        let rhs = &model.project(&x, lambda).unwrap() * &model.project(&y, lambda).unwrap();
        assert!((&lhs - &rhs).max_abs() <= 1e-10, "pair {k}");
        let unit = model.project(&ComplexMatrix::identity(4), lambda).unwrap();
        assert!((&unit - &ComplexMatrix::identity(4)).max_abs() <= 1e-14);
    }
    let plain = QuotientModel::plain(vec![1, 2, 1]).unwrap();
    assert_eq!(plain.project(&ComplexMatrix::identity(4), c(0.3)).unwrap(), ComplexMatrix::identity(4));
}

#[test]
fn riesz_idempotents_commute_with_projection() {
    let model = QuotientModel::plain(vec![2, 1, 2]).unwrap();
    let spec = SpectrumSpec::real(&[-1.0, 0.5, 2.0]).unwrap();
    let mut s = Sampler::new(13);
    for _ in 0..100 {
        let mut b = ComplexMatrix::zeros(5, 5);
        let mut offset = 0;
        for &k in model.block_sizes() {
            b.set_submatrix(offset, offset, &s.algebraic(&spec, k, false, 4.0).matrix);
            offset += k;
        }
        let x = &b + &model.random_kernel_element(&mut s);
        let up = riesz_partition(&x, &spec, 128).unwrap();
        let down = riesz_partition(&b, &spec, 128).unwrap();
        for (e, f) in up.iter().zip(&down) {
            assert!((&model.diagonal_part(e) - f).max_abs() <= 1e-8);
        }
    }
}

#[test]
fn flip_model_family_certifies_on_grid() {
    let tol = Tolerances::default();
    let (model, family, spec) = flip_example(1.0);
    let grid: Vec<Complex64> = real_grid(50, 0.95).into_iter().map(c).collect();
    let lifted = lift_family(&model, &family, &spec, &grid, &tol).unwrap();
    assert!(lifted.report.certified, "{}", lifted.report.to_json());
    assert_eq!(lifted.report.points.len(), 50);
    for (p, &lambda) in lifted.report.points.iter().zip(&grid) {
        let a = lifted.eval(lambda).unwrap();
        let b = family.eval(lambda);
        assert!(operator_norm(&(&model.diagonal_part(&a) - &b)) <= 1e-8);
        assert!(spec.relative_residual(&a) <= 1e-8);
        assert!(p.membership <= 1e-8 && p.projection_error <= 1e-8);
    }
    assert!(lifted.report.fit_residual.unwrap() <= 1e-7);
}

#[test]
fn kernel_perturbations() {
    let tol = Tolerances::default();
    let (model, family, spec) = flip_example(1.0);
    let grid: Vec<Complex64> = real_grid(50, 0.9).into_iter().map(c).collect();
    let mut s = Sampler::new(14);
    let k0 = model.random_kernel_element(&mut s);
    let k1 = model.random_kernel_element(&mut s);
    let kernel = AnalyticFamily::new(vec![k0, k1], 1.0, true).unwrap();
    let plain = lift_family(&model, &family, &spec, &grid, &tol).unwrap();
    let moved = lift_family_with_kernel(&model, &family, &kernel, &spec, &grid, &tol).unwrap();
    assert!(moved.report.certified, "{}", moved.report.to_json());
    let changed = grid
        .iter()
        .map(|&l| (&plain.eval(l).unwrap() - &moved.eval(l).unwrap()).max_abs())
        .fold(0.0, f64::max);
    assert!(changed > 1e-3);

    // p(x0) lies in the kernel and commutes with x0
    let b0 = family.eval(c(0.0));
    let x0 = &b0 + &kernel.eval(c(0.0));
    let commuting = spec.eval_poly(&x0);
    assert!(model.lower_defect(&commuting) == 0.0);
    let nil = model.strict_upper_part(&commuting);
    assert!((&nil - &commuting).max_abs() < 1e-12);
    let base = AnalyticFamily::constant(kernel.eval(c(0.0)), 1.0, true).unwrap();
    let shifted = AnalyticFamily::constant(&kernel.eval(c(0.0)) + &nil, 1.0, true).unwrap();
    let b_const = AnalyticFamily::constant(b0, 1.0, true).unwrap();
    let a = lift_family_with_kernel(&model, &b_const, &base, &spec, &[c(0.0)], &tol).unwrap();
    let a2 = lift_family_with_kernel(&model, &b_const, &shifted, &spec, &[c(0.0)], &tol).unwrap();
    assert!((&a.eval(c(0.0)).unwrap() - &a2.eval(c(0.0)).unwrap()).max_abs() <= 1e-8);
}

#[test]
fn repaired_partition_keeps_invariants() {
    let tol = Tolerances::default();
    let (model, family, spec) = flip_example(1.0);
    let mut s = Sampler::new(15);
    let kernel = AnalyticFamily::constant(model.random_kernel_element(&mut s), 1.0, true).unwrap();
    let lifter = algpaths::lifting::Lifter::new(model, family, spec, tol).unwrap().with_kernel(kernel).unwrap();
    for t in [-0.8, 0.0, 0.4, 0.8] {
        let (parts, _) = lifter.idempotents(c(t)).unwrap();
        let d = PartitionDefects::measure(&parts);
        assert!(d.worst() <= 1e-9 * d.scale, "{d:?}");
    }
}

#[test]
fn selfadjoint_lift_on_flip_model() {
    let tol = Tolerances::default();
    let (model, family, spec) = flip_example(1.0);
    let lifted = lift_family_selfadjoint(&model, &family, &spec, &real_grid(50, 0.95), &tol).unwrap();
    assert!(lifted.report.certified, "{}", lifted.report.to_json());
    assert!(lifted.report.max_involution_defect.unwrap() <= 1e-8);

    let identity = QuotientModel::new(vec![4], true, Vec::new()).unwrap();
    let b0 = family.eval(c(0.3));
    let constant = AnalyticFamily::constant(b0.clone(), 1.0, true).unwrap();
    let same = lift_family_selfadjoint(&identity, &constant, &spec, &[0.0, 0.5], &tol).unwrap();
    assert!((&same.eval(c(0.1)).unwrap() - &b0).max_abs() < 1e-12);
}

#[test]
fn selfadjoint_lift_preconditions() {
    let tol = Tolerances::default();
    let (_, family, spec) = flip_example(1.0);
    let plain = QuotientModel::plain(vec![1, 2, 1]).unwrap();
    assert!(matches!(lift_family_selfadjoint(&plain, &family, &spec, &[0.0], &tol), Err(LiftError::NotInvolutive)));
    let model = QuotientModel::new(vec![1, 2, 1], true, Vec::new()).unwrap();
    let not_fixed = AnalyticFamily::constant(ComplexMatrix::from_real_diag(&[0.0, 1.0, 2.0, 2.0]), 1.0, true).unwrap();
    assert!(matches!(
        lift_family_selfadjoint(&model, &not_fixed, &spec, &[0.0], &tol),
        Err(LiftError::NotSelfAdjointInput { .. })
    ));
}

#[test]
fn rejects_non_algebraic_targets() {
    let tol = Tolerances::default();
    let (model, _, spec) = flip_example(1.0);
    let bad = AnalyticFamily::constant(ComplexMatrix::from_real_diag(&[0.5, 1.0, 1.0, 1.0]), 1.0, false).unwrap();
    assert!(matches!(
        lift_family(&model, &bad, &spec, &[c(0.0)], &tol),
        Err(LiftError::NotLiftableInput { .. })
    ));
}

#[test]
fn local_lift_stops_at_degenerate_twist() {
    let tol = Tolerances::default();
    let (_, family, spec) = flip_example(1.0);
    let model = QuotientModel::new(vec![1, 2, 1], false, degenerating_twist(0.7)).unwrap();
    let grid: Vec<Complex64> = (0..50).map(|k| c(0.02 * k as f64)).collect();
    let local = local_lift(&model, &family, &spec, &grid, &tol).unwrap();
    assert!(local.radius <= 0.7, "radius {}", local.radius);
    assert!(local.radius > 0.5);
    assert!(local.stopped_at.is_some());
    assert!(local.family.report.certified, "{}", local.family.report.to_json());
    assert!(local.family.report.points.iter().all(|p| p.lambda().norm() <= local.radius));
}

#[test]
fn local_lift_without_twist_keeps_whole_grid() {
    let tol = Tolerances::default();
    let (_, family, spec) = flip_example(1.0);
    let model = QuotientModel::plain(vec![1, 2, 1]).unwrap();
    let grid: Vec<Complex64> = (0..40).map(|k| Complex64::from_polar(0.9 * k as f64 / 39.0, 0.3 * k as f64)).collect();
    let local = local_lift(&model, &AnalyticFamily::new(family.coefficients().to_vec(), 1.0, false).unwrap(), &spec, &grid, &tol).unwrap();
    assert!(local.stopped_at.is_none());
    assert_eq!(local.family.report.points.len(), 40);
    assert!((local.radius - 0.9).abs() < 1e-12);
}

#[test]
fn local_lift_fails_at_zero() {
    let tol = Tolerances::default();
    let (_, family, spec) = flip_example(1.0);
    let model = QuotientModel::new(vec![1, 2, 1], false, degenerating_twist(0.7)).unwrap();
    let mut twist = degenerating_twist(0.7);
    twist[0][(1, 1)] = c(0.0);
    let broken = QuotientModel::new(vec![1, 2, 1], false, twist).unwrap();
    assert!(local_lift(&model, &family, &spec, &[c(0.1)], &tol).is_ok());
    assert!(matches!(local_lift(&broken, &family, &spec, &[c(0.1)], &tol), Err(LiftError::NotLiftableAtZero(_))));
}

#[test]
fn json_round_trip() {
    let (model, family, _) = flip_example(1.0);
    let text = serde_json::to_string(&model).unwrap();
    assert!(text.contains("\"block_sizes\"") && text.contains("\"twist_coeffs\""));
    assert_eq!(QuotientModel::from_json(&text).unwrap(), model);
    let ftext = serde_json::to_string(&family).unwrap();
    assert!(ftext.contains("\"coeffs\"") && ftext.contains("\"radius\"") && ftext.contains("\"real\""));
    assert_eq!(serde_json::from_str::<AnalyticFamily>(&ftext).unwrap(), family);
}
