use super::*;
use crate::archive::Individual;
use crate::genotype::Genotype;
use crate::problems::{generate_instance, Family};
use rand::seq::SliceRandom;
use rand::Rng;

fn ov(a: f64, b: f64) -> ObjectiveVector {
    ObjectiveVector::from([a, b])
}

/// Counts unit cells of the integer grid covered by the dominated region.
fn grid_hv(set: &[ObjectiveVector], r: (i64, i64)) -> f64 {
    let lo = set.iter().map(|p| p[0].min(p[1]) as i64).min().unwrap_or(0).min(0);
    let mut cells = 0;
    for x in lo..r.0 {
        for y in lo..r.1 {
            if set.iter().any(|p| p[0] <= x as f64 && p[1] <= y as f64) {
                cells += 1;
            }
        }
    }
    cells as f64
}

fn random_set<R: Rng>(rng: &mut R, n: usize, span: i64) -> Vec<ObjectiveVector> {
    (0..n).map(|_| ov(rng.gen_range(0..span) as f64, rng.gen_range(0..span) as f64)).collect()
}

#[test]
fn basic_values() {
    assert_eq!(hypervolume_2d(&[ov(1.0, 1.0)], &ov(2.0, 2.0)).unwrap(), 1.0);
    let chain = [ov(1.0, 3.0), ov(2.0, 2.0), ov(3.0, 1.0)];
    assert_eq!(hypervolume_2d(&chain, &ov(4.0, 4.0)).unwrap(), 6.0);
    assert_eq!(grid_hv(&chain, (4, 4)), 6.0);
    assert_eq!(hypervolume_2d(&[ov(3.0, 3.0)], &ov(2.0, 2.0)).unwrap(), 0.0);
    assert_eq!(hypervolume_2d(&[], &ov(2.0, 2.0)).unwrap(), 0.0);
    assert_eq!(count_outside(&[ov(3.0, 3.0), ov(1.0, 1.0), ov(1.0, 2.0)], &ov(2.0, 2.0)), 2);
}

#[test]
fn only_two_objectives() {
    let three = ObjectiveVector::from([1.0, 1.0, 1.0]);
    let err = hypervolume_2d(&[three.clone()], &three).unwrap_err();
    assert_eq!(err, Error::HypervolumeDimension(3));
    assert!(alloc::format!("{err}").starts_with("exact HV implemented for m=2 only"));
    assert!(hv_contributions(&[three.clone()], &three).is_err());
}

#[test]
fn matches_grid_oracle() {
    let mut rng = crate::seed::stream(1);
    for _ in 0..300 {
        let n = rng.gen_range(1..15);
        let set = random_set(&mut rng, n, 20);
        assert_eq!(hypervolume_2d(&set, &ov(18.0, 18.0)).unwrap(), grid_hv(&set, (18, 18)));
    }
}

#[test]
fn monotone_and_invariant() {
    let mut rng = crate::seed::stream(2);
    let r = ov(100.0, 100.0);
    for _ in 0..300 {
        let mut set: Vec<ObjectiveVector> =
            (0..20).map(|_| ov(rng.gen_range(0.0..110.0), rng.gen_range(0.0..110.0))).collect();
        let hv = hypervolume_2d(&set, &r).unwrap();
        set.shuffle(&mut rng);
        assert_eq!(hypervolume_2d(&set, &r).unwrap(), hv);

        let nd: Vec<ObjectiveVector> =
            non_dominated_filter(&set).unwrap().into_iter().map(|i| set[i].clone()).collect();
        assert_eq!(hypervolume_2d(&nd, &r).unwrap(), hv);

        set.push(ov(rng.gen_range(0.0..110.0), rng.gen_range(0.0..110.0)));
        assert!(hypervolume_2d(&set, &r).unwrap() >= hv);
    }
}

#[test]
fn archive_path_agrees() {
    let mut rng = crate::seed::stream(3);
    let r = ov(50.0, 50.0);
    for _ in 0..100 {
        let set = random_set(&mut rng, 40, 60);
        let mut archive = Archive::new();
        for z in &set {
            archive.insert(Individual::new(Genotype::BitString(alloc::vec![true, false]), z.clone()));
        }
        assert_eq!(archive_hypervolume(&archive, &r).unwrap(), hypervolume_2d(&set, &r).unwrap());
    }
}

#[test]
fn contribution_examples() {
    let chain = [ov(1.0, 3.0), ov(2.0, 2.0), ov(3.0, 1.0)];
    let c = hv_contributions(&chain, &ov(4.0, 4.0)).unwrap();
    assert_eq!(c, alloc::vec![1.0, 1.0, 1.0]);
    assert_eq!(hv_contributions(&[ov(1.0, 2.0)], &ov(4.0, 4.0)).unwrap(), alloc::vec![6.0]);
    assert_eq!(
        hv_contributions(&[ov(1.0, 1.0), ov(2.0, 2.0)], &ov(4.0, 4.0)),
        Err(Error::DominatedMember)
    );
    assert_eq!(
        hv_contributions(&[ov(1.0, 1.0), ov(1.0, 2.0)], &ov(4.0, 4.0)),
        Err(Error::DominatedMember)
    );
    // Duplicates do not dominate each other and contribute nothing.
    assert_eq!(
        hv_contributions(&[ov(2.0, 2.0), ov(1.0, 3.0), ov(2.0, 2.0)], &ov(4.0, 4.0)).unwrap(),
        alloc::vec![0.0, 1.0, 0.0]
    );
}

fn random_front<R: Rng>(rng: &mut R, n: usize) -> Vec<ObjectiveVector> {
    let set = random_set(rng, n * 3, 30);
    let mut front: Vec<ObjectiveVector> =
        non_dominated_filter(&set).unwrap().into_iter().map(|i| set[i].clone()).collect();
    front.truncate(n);
    front
}

#[test]
fn contributions_match_leave_one_out() {
    let mut rng = crate::seed::stream(4);
    for _ in 0..1000 {
        let n = rng.gen_range(1..=12);
        let front = random_front(&mut rng, n);
        let r = ov(rng.gen_range(10..35) as f64, rng.gen_range(10..35) as f64);
        let full = hypervolume_2d(&front, &r).unwrap();
        let contrib = hv_contributions(&front, &r).unwrap();
        for i in 0..front.len() {
            let mut rest = front.clone();
            rest.remove(i);
            assert_eq!(contrib[i], full - hypervolume_2d(&rest, &r).unwrap());
        }
        assert!(contrib.iter().sum::<f64>() <= full);
    }
}

/// Monte-Carlo estimate of the dominated area inside the box spanned by the
/// componentwise minimum and the reference point, with its standard error.
pub(crate) fn monte_carlo_hv<R: Rng>(set: &[ObjectiveVector], r: &ObjectiveVector, samples: usize, rng: &mut R) -> (f64, f64) {
    let mut nd: Vec<ObjectiveVector> =
        non_dominated_filter(set).unwrap().into_iter().map(|i| set[i].clone()).collect();
    nd.sort_by(|a, b| a.lex_cmp(b));
    let lo0 = nd.iter().map(|p| p[0]).fold(r[0], f64::min);
    let lo1 = nd.iter().map(|p| p[1]).fold(r[1], f64::min);
    let area = (r[0] - lo0) * (r[1] - lo1);
    let mut hits = 0usize;
    for _ in 0..samples {
        let x = rng.gen_range(lo0..r[0]);
        let y = rng.gen_range(lo1..r[1]);
        let k = nd.partition_point(|p| p[0] <= x);
        if k > 0 && nd[k - 1][1] <= y {
            hits += 1;
        }
    }
    let p = hits as f64 / samples as f64;
    (area * p, area * libm::sqrt(p * (1.0 - p) / samples as f64))
}

#[test]
fn agrees_with_monte_carlo() {
    let mut rng = crate::seed::stream(5);
    for _ in 0..40 {
        let n = rng.gen_range(1..40);
        let set: Vec<ObjectiveVector> =
            (0..n).map(|_| ov(rng.gen_range(0.0..1.0), rng.gen_range(0.0..1.0))).collect();
        let r = ov(1.0, 1.0);
        let exact = hypervolume_2d(&set, &r).unwrap();
        let (est, se) = monte_carlo_hv(&set, &r, 100_000, &mut rng);
        assert!((exact - est).abs() <= 3.0 * se.max(1e-12), "{exact} vs {est} ± {se}");
    }
}

#[test]
fn ordering_survives_affine_rescaling() {
    let mut rng = crate::seed::stream(6);
    for _ in 0..200 {
        let a = random_set(&mut rng, 10, 50);
        let b = random_set(&mut rng, 10, 50);
        let r = ov(55.0, 55.0);
        let (ha, hb) = (hypervolume_2d(&a, &r).unwrap(), hypervolume_2d(&b, &r).unwrap());
        let (s0, s1, t0, t1) = (rng.gen_range(0.5..4.0), rng.gen_range(0.5..4.0), rng.gen_range(-9.0..9.0), rng.gen_range(-9.0..9.0));
        let f = |p: &ObjectiveVector| ov(s0 * p[0] + t0, s1 * p[1] + t1);
        let (a2, b2): (Vec<_>, Vec<_>) = (a.iter().map(f).collect(), b.iter().map(f).collect());
        let r2 = f(&r);
        let (ha2, hb2) = (hypervolume_2d(&a2, &r2).unwrap(), hypervolume_2d(&b2, &r2).unwrap());
        assert!(((ha2 - s0 * s1 * ha).abs()) <= 1e-9 * ha2.max(1.0));
        if (ha - hb).abs() > 1e-9 * ha.max(hb) {
            assert_eq!(ha < hb, ha2 < hb2);
        }
    }
}

#[test]
fn nadir_offsets() {
    assert_eq!(nadir_offset(10.0, 20.0, true), 9.0);
    assert_eq!(nadir_offset(10.0, 20.0, false), 21.0);
    assert_eq!(nadir_offset(5.0, 5.0, false), 5.0);
}

#[test]
fn sampled_reference_point_is_deterministic_and_beyond_the_samples() {
    for family in Family::ALL {
        let dim = if family == Family::Monk { 20 } else { 15 };
        let p = generate_instance(family, dim, 2, 9).unwrap();
        let a = sample_reference_point(&p, 500, 3).unwrap();
        let b = sample_reference_point(&p, 500, 3).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.provenance, Provenance::Sampled { seed: 3, n_samples: 500 });
        assert!(a.degenerate.is_empty());
        // Every non-dominated random sample lies strictly inside.
        let mut rng = stream(3);
        let samples: Vec<ObjectiveVector> =
            (0..500).map(|_| p.evaluate(&p.random_genotype(&mut rng)).unwrap()).collect();
        for i in non_dominated_filter(&samples).unwrap() {
            assert!(samples[i][0] < a.values[0] && samples[i][1] < a.values[1]);
        }
    }
    let p = generate_instance(Family::Mokp, 10, 2, 0).unwrap();
    assert!(sample_reference_point(&p, 1, 0).is_err());
}
