use super::*;
use crate::genotype::is_permutation;
use crate::seed::stream;
use alloc::collections::BTreeSet;
use rand::seq::SliceRandom;

fn hamming(a: &[bool], b: &[bool]) -> usize {
    a.iter().zip(b).filter(|(x, y)| x != y).count()
}

#[test]
fn uniform_crossover_identical_parents() {
    let mut rng = stream(1);
    let a: Vec<bool> = (0..70).map(|i| i % 3 == 0).collect();
    let (c1, c2) = uniform_crossover(&a, &a, &mut rng).unwrap();
    assert_eq!(c1, a);
    assert_eq!(c2, a);
}

#[test]
fn uniform_crossover_is_complementary() {
    let mut rng = stream(2);
    for _ in 0..100 {
        let a: Vec<bool> = (0..130).map(|_| rng.gen()).collect();
        let b: Vec<bool> = (0..130).map(|_| rng.gen()).collect();
        let (c1, c2) = uniform_crossover(&a, &b, &mut rng).unwrap();
        for i in 0..130 {
            assert!((c1[i] == a[i] && c2[i] == b[i]) || (c1[i] == b[i] && c2[i] == a[i]));
        }
    }
    assert!(uniform_crossover(&[true], &[true, false], &mut rng).is_err());
}

#[test]
fn uniform_crossover_mixes_about_half() {
    // Hoeffding: P(|X - 5000| > 500) <= 2 exp(-50) for X ~ Bin(10^4, 1/2).
    let zeros = vec![false; 10_000];
    let ones = vec![true; 10_000];
    for seed in 0..20 {
        let mut rng = stream(seed);
        let (c1, c2) = uniform_crossover(&zeros, &ones, &mut rng).unwrap();
        let pop = c1.iter().filter(|&&b| b).count();
        assert!((4500..=5500).contains(&pop), "popcount {pop}");
        assert_eq!(pop + c2.iter().filter(|&&b| b).count(), 10_000);
    }
}

#[test]
fn bitflip_extremes() {
    let mut rng = stream(3);
    let g: Vec<bool> = (0..50).map(|i| i % 2 == 0).collect();
    let mut same = g.clone();
    bitflip_mutation(&mut same, 0.0, &mut rng);
    assert_eq!(same, g);
    let mut comp = g.clone();
    bitflip_mutation(&mut comp, 1.0, &mut rng);
    assert!(comp.iter().zip(&g).all(|(a, b)| a != b));
}

#[test]
fn bitflip_rate_one_over_d() {
    // Flips per call ~ Bin(100, 0.01): mean 1, variance 0.99. Over 10^4
    // calls the sample mean has standard error sqrt(0.99 / 10^4).
    let d = 100;
    let trials = 10_000;
    let mut rng = stream(4);
    let mut total = 0usize;
    let mut per_position = vec![0usize; d];
    for _ in 0..trials {
        let g = vec![false; d];
        let mut h = g.clone();
        bitflip_mutation(&mut h, 1.0 / d as f64, &mut rng);
        total += hamming(&g, &h);
        for (i, &b) in h.iter().enumerate() {
            per_position[i] += b as usize;
        }
    }
    let mean = total as f64 / trials as f64;
    let se = libm::sqrt(0.99 / trials as f64);
    assert!((mean - 1.0).abs() <= 3.0 * se, "mean flips {mean}");
    // Every position flips ~100 times; none should be starved.
    assert!(per_position.iter().all(|&c| c > 50 && c < 160), "{per_position:?}");
}

#[test]
fn k_bit_flip_distances() {
    let mut rng = stream(5);
    for k in [1usize, 2] {
        for _ in 0..500 {
            let g: Vec<bool> = (0..12).map(|_| rng.gen()).collect();
            let mut h = g.clone();
            k_bit_flip(&mut h, k, &mut rng);
            assert_eq!(hamming(&g, &h), k);
        }
    }
    // k = D flips everything.
    let mut h = vec![false; 2];
    k_bit_flip(&mut h, 2, &mut rng);
    assert_eq!(h, vec![true, true]);
}

#[test]
fn one_bit_flip_is_uniform() {
    // Chi-square with 3 degrees of freedom; 16.27 is the 0.999 quantile.
    let mut rng = stream(6);
    let mut counts = [0usize; 4];
    for _ in 0..10_000 {
        if let Move::Flip(bits) = sample_k_bit_flip(4, 1, &mut rng) {
            counts[bits[0]] += 1;
        }
    }
    let chi2: f64 = counts.iter().map(|&c| (c as f64 - 2500.0).powi(2) / 2500.0).sum();
    assert!(chi2 < 16.27, "chi2 = {chi2}, counts = {counts:?}");
}

#[test]
fn order_crossover_hand_trace() {
    let a = [0, 1, 2, 3, 4, 5, 6, 7];
    let b = [7, 6, 5, 4, 3, 2, 1, 0];
    let (c1, c2) = order_crossover_with_segment(&a, &b, 3, 5).unwrap();
    // Keep a[3..=5] = 3 4 5; b read from position 6 cyclically is
    // 1 0 7 6 5 4 3 2, minus {3,4,5} gives 1 0 7 6 2, written into
    // positions 6 7 0 1 2.
    assert_eq!(c1, vec![7, 6, 2, 3, 4, 5, 1, 0]);
    // Keep b[3..=5] = 4 3 2; a from position 6 is 6 7 0 1 2 3 4 5, minus
    // {2,3,4} gives 6 7 0 1 5.
    assert_eq!(c2, vec![0, 1, 5, 4, 3, 2, 6, 7]);
}

#[test]
fn order_crossover_identical_parents() {
    let mut rng = stream(7);
    let mut a: Vec<usize> = (0..15).collect();
    a.shuffle(&mut rng);
    for _ in 0..50 {
        let (c1, c2) = order_crossover(&a, &a, &mut rng).unwrap();
        assert_eq!(c1, a);
        assert_eq!(c2, a);
    }
}

#[test]
fn cycle_crossover_hand_trace() {
    let (c1, c2) = cycle_crossover(&[0, 1, 2, 3], &[1, 0, 3, 2]).unwrap();
    assert_eq!(c1, vec![0, 1, 3, 2]);
    assert_eq!(c2, vec![1, 0, 2, 3]);
    let a = [4, 2, 0, 1, 3];
    let (d1, d2) = cycle_crossover(&a, &a).unwrap();
    assert_eq!(d1, a.to_vec());
    assert_eq!(d2, a.to_vec());
}

#[test]
fn cycle_crossover_provenance() {
    let mut rng = stream(8);
    for _ in 0..500 {
        let d = rng.gen_range(2..30);
        let mut a: Vec<usize> = (0..d).collect();
        let mut b = a.clone();
        a.shuffle(&mut rng);
        b.shuffle(&mut rng);
        let (c1, c2) = cycle_crossover(&a, &b).unwrap();
        for i in 0..d {
            assert!(c1[i] == a[i] || c1[i] == b[i]);
            assert!(c2[i] == a[i] || c2[i] == b[i]);
            assert!((c1[i], c2[i]) == (a[i], b[i]) || (c1[i], c2[i]) == (b[i], a[i]));
        }
        assert!(is_permutation(&c1) && is_permutation(&c2));
    }
}

#[test]
fn two_opt_full_reversal() {
    let mut g = Genotype::Permutation(vec![0, 1, 2, 3, 4]);
    Move::TwoOpt { i: 0, j: 4 }.apply(&mut g);
    assert_eq!(g, Genotype::Permutation(vec![4, 3, 2, 1, 0]));
}

#[test]
fn two_opt_reaches_every_pair() {
    let mut seen = BTreeSet::new();
    for seed in 0..2000 {
        let mut rng = stream(seed);
        if let Move::TwoOpt { i, j } = sample_two_opt(6, &mut rng) {
            assert!(i < j && j < 6);
            seen.insert((i, j));
        }
    }
    assert_eq!(seen.len(), 15);
}

#[test]
fn two_swap_always_changes() {
    let mut rng = stream(9);
    for _ in 0..2000 {
        let mut g: Vec<usize> = (0..7).collect();
        g.shuffle(&mut rng);
        let before = g.clone();
        two_swap_mutation(&mut g, &mut rng);
        assert_eq!(g.iter().zip(&before).filter(|(a, b)| a != b).count(), 2);
        assert!(is_permutation(&g));
    }
    let mut pair = vec![0, 1];
    two_swap_mutation(&mut pair, &mut rng);
    assert_eq!(pair, vec![1, 0]);
}

#[test]
fn permutation_operators_preserve_bijection() {
    let mut rng = stream(10);
    for _ in 0..100_000 {
        let d = rng.gen_range(3..16);
        let mut a: Vec<usize> = (0..d).collect();
        let mut b = a.clone();
        a.shuffle(&mut rng);
        b.shuffle(&mut rng);
        let (x, y) = match rng.gen_range(0..4) {
            0 => order_crossover(&a, &b, &mut rng).unwrap(),
            1 => cycle_crossover(&a, &b).unwrap(),
            2 => {
                two_opt_mutation(&mut a, &mut rng);
                (a, b)
            }
            _ => {
                two_swap_mutation(&mut a, &mut rng);
                (a, b)
            }
        };
        assert!(is_permutation(&x) && is_permutation(&y));
        assert_eq!(x.len(), d);
    }
}

#[test]
fn variation_pipeline_is_deterministic() {
    let run = |seed: u64| {
        let mut rng = stream(seed);
        let mut out = Vec::new();
        for family in Family::ALL {
            let v = Variation::new(family, 20, OperatorConfig::default());
            let (a, b) = match family.encoding() {
                crate::genotype::Encoding::BitString => (
                    Genotype::BitString((0..20).map(|_| rng.gen()).collect()),
                    Genotype::BitString((0..20).map(|_| rng.gen()).collect()),
                ),
                crate::genotype::Encoding::Permutation => {
                    let mut x: Vec<usize> = (0..20).collect();
                    let mut y = x.clone();
                    x.shuffle(&mut rng);
                    y.shuffle(&mut rng);
                    (Genotype::Permutation(x), Genotype::Permutation(y))
                }
            };
            let (mut c1, c2) = v.crossover(&a, &b, &mut rng);
            v.mutate(&mut c1, &mut rng);
            out.push((c1, c2, v.local_move(&mut rng)));
        }
        out
    };
    assert_eq!(run(42), run(42));
    assert_ne!(run(42), run(43));
}

#[test]
fn local_moves_by_family() {
    let mut rng = stream(11);
    let kinds = [
        (Family::Mokp, 2usize),
        (Family::Monk, 1),
    ];
    for (family, k) in kinds {
        let v = Variation::new(family, 10, OperatorConfig::default());
        match v.local_move(&mut rng) {
            Move::Flip(bits) => assert_eq!(bits.len(), k),
            other => panic!("unexpected {other:?}"),
        }
    }
    let tsp = Variation::new(Family::Motsp, 10, OperatorConfig::default());
    assert!(matches!(tsp.local_move(&mut rng), Move::TwoOpt { .. }));
    let qap = Variation::new(Family::Moqap, 10, OperatorConfig::default());
    assert!(matches!(qap.local_move(&mut rng), Move::Swap { .. }));
}

#[test]
fn config_validation() {
    assert!(OperatorConfig::default().validate().is_ok());
    let bad = OperatorConfig { crossover_rate: 1.5, ..OperatorConfig::default() };
    assert!(bad.validate().is_err());
}
