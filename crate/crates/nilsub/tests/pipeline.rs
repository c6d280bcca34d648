use nilsub::ar::{ar_quiver, tau_orbit, tau_s, ArError, OrbitEnd};
use nilsub::catalog::{closed_form, enumerate, Catalog, EnumerateOptions, Strategy};
use nilsub::exhibits;
use nilsub::hom::hom_basis;
use nilsub::io;
use nilsub::krull::{decompose, is_isomorphic, local_iso, DecomposeOptions};
use nilsub::linalg::Mat;
use nilsub::rep::{random_extension, RepObject, Shape, StandardKind};
use nilsub::rng::{seeded, Rng};
use nilsub::zpn::{c_lambda, to_rep, LayerFunctor};
use rand::Rng as _;

fn shape(p: u64, m: usize, n: usize) -> Shape {
    Shape::new(p, m, n).unwrap()
}

#[test]
fn object_files_round_trip_in_both_forms() {
    let x = exhibits::a_lambda(3, 2).unwrap();
    let back = io::parse_object(&io::write_object(&x)).unwrap();
    assert_eq!(back, x);
    let boxed = io::parse_object(&io::write_box(&exhibits::a_lambda_diagram(2), x.shape)).unwrap();
    assert!(local_iso(&boxed, &x).is_some());
}

#[test]
fn catalog_round_trips_through_jsonl() {
    let cat = enumerate(shape(3, 2, 4), &EnumerateOptions { seed: 5, ..Default::default() }).unwrap();
    let mut buf = Vec::new();
    cat.write_to(&mut buf).unwrap();
    let back = Catalog::read_from(buf.as_slice()).unwrap();
    assert_eq!(back.len(), cat.len());
    assert_eq!(back.complete, cat.complete);
    for (a, b) in back.entries.iter().zip(&cat.entries) {
        assert_eq!(a.representative, b.representative);
        assert_eq!(a.fingerprint, b.fingerprint);
    }
}

#[test]
fn enumeration_is_deterministic_for_a_seed() {
    let sh = shape(2, 3, 4);
    let opts = EnumerateOptions { seed: 11, ..Default::default() };
    let (a, b) = (enumerate(sh, &opts).unwrap(), enumerate(sh, &opts).unwrap());
    let (mut x, mut y) = (Vec::new(), Vec::new());
    a.write_to(&mut x).unwrap();
    b.write_to(&mut y).unwrap();
    assert_eq!(x, y);
}

#[test]
fn strategies_agree_on_a_finite_case() {
    let sh = shape(2, 2, 5);
    let closed = closed_form(sh).unwrap();
    for strategy in [Strategy::Sampling, Strategy::Combined] {
        let cat = enumerate(sh, &EnumerateOptions { strategy, stable_rounds: 200, ..Default::default() }).unwrap();
        assert_eq!(cat.len(), closed.len(), "{strategy}");
        assert!(closed.iter().all(|x| cat.find(x).is_some()), "{strategy}");
    }
}

#[test]
fn tau_closure_alone_reaches_only_the_non_stable_orbits() {
    let sh = shape(2, 2, 5);
    let closed = enumerate(sh, &EnumerateOptions { strategy: Strategy::ClosedForm, ..Default::default() }).unwrap();
    let mut tau = enumerate(sh, &EnumerateOptions { strategy: Strategy::TauClosure, ..Default::default() }).unwrap();
    assert!(tau.entries.iter().all(|e| closed.find(&e.representative).is_some()));
    let summary = tau.analyze().unwrap();
    assert!(summary.stable_lengths.is_empty());
    let chained: usize = summary.chains.iter().map(|c| c.len).sum();
    assert_eq!(chained, tau.len());
    assert!(tau.len() < closed.len());
}

#[test]
fn decomposition_of_a_direct_sum_recovers_the_summands() {
    let sh = shape(5, 3, 7);
    let parts = [exhibits::a_lambda(5, 1).unwrap(), exhibits::a_lambda(5, 3).unwrap(), RepObject::standard(StandardKind::Y, sh)];
    let x = RepObject::sum_all(sh, &parts).unwrap();
    let mut rng = seeded(2);
    let d = decompose(&x, &mut rng, &DecomposeOptions::default());
    assert!(d.is_complete());
    assert_eq!(d.pieces.len(), 3);
    for part in &parts {
        assert!(d.pieces.iter().any(|p| local_iso(&p.object, part).is_some()));
    }
}

#[test]
fn tau_orbits_stop_at_relative_projectives() {
    let sh = shape(2, 3, 5);
    let y = RepObject::standard(StandardKind::Y, sh);
    assert!(matches!(tau_s(&y), Err(ArError::RelativelyProjective(StandardKind::Y))));
    let i = RepObject::standard(StandardKind::I, sh);
    let r = tau_orbit(&i, 20).unwrap();
    assert!(matches!(r.end, OrbitEnd::RelativeProjective(StandardKind::P)), "{:?}", r.end);
    assert_eq!(r.len(), 6);
}

fn invertible(rng: &mut Rng, p: u64, d: usize) -> Mat {
    loop {
        let m = Mat::from_vec(p, d, d, (0..d * d).map(|_| rng.gen_range(0..p)).collect());
        if m.is_invertible() {
            return m;
        }
    }
}

#[test]
fn hom_dimensions_are_invariant_under_change_of_basis() {
    let mut rng = seeded(9);
    let sh = shape(3, 2, 4);
    for _ in 0..20 {
        let x = RepObject::random(&mut rng, sh, 4, 2);
        let y = RepObject::random_dense(&mut rng, sh, 4, 2);
        let e = random_extension(&x, &y, &mut rng).unwrap();
        let d = hom_basis(&e, &y).unwrap().dim();
        let (a, b) = (invertible(&mut rng, e.p(), e.du()), invertible(&mut rng, e.p(), e.dv()));
        let twisted = e.conjugate(&a, &b);
        assert_eq!(hom_basis(&twisted, &y).unwrap().dim(), d);
    }
}

#[test]
fn ar_quiver_of_a_finite_case_satisfies_the_mesh_relations() {
    let cat = enumerate(shape(2, 2, 4), &EnumerateOptions::default()).unwrap();
    let q = ar_quiver(&cat.objects(), &mut seeded(0)).unwrap();
    assert_eq!(q.nodes.len(), 14);
    assert!(q.is_connected());
    assert!(q.mesh_failures().is_empty());
}

#[test]
fn layer_functor_image_of_c_lambda_is_a_lambda() {
    let mut rng = seeded(1);
    for lambda in 0..3 {
        let x = to_rep(&c_lambda(3, lambda).unwrap(), &LayerFunctor::s3n7()).unwrap();
        let a = exhibits::a_lambda(3, lambda).unwrap();
        assert!(is_isomorphic(&x, &a, &mut rng, &DecomposeOptions::default()).unwrap().is_iso(), "λ = {lambda}");
    }
}
