use proptest::prelude::*;
use qmc_core::format::{parse_points_csv, points_csv};
use qmc_core::ld::*;
use qmc_core::measures::*;

proptest! {
    #[test]
    fn net_ranges_are_slices(seed in any::<u64>(), a in 0u64..300, len in 0u64..300) {
        let mats = default_generating_matrices();
        let rand = Randomization::new(RandomizationKind::LmsWithDigitalShift, seed);
        let net = DigitalNet::new(mats, 3, Ordering::Gray, rand).unwrap();
        let full = net.points(0, a + len).unwrap();
        let part = net.points(a, a + len).unwrap();
        prop_assert_eq!(part.values(), &full.values()[(3 * a) as usize..]);
    }

    #[test]
    fn randomized_points_lie_inside(seed in any::<u64>(), d in 1usize..6) {
        let mats = default_generating_matrices();
        let gen = default_lattice_vector();
        let blocks = [
            digital_net_points(mats, d, 0, 512, Ordering::Standard, Randomization::new(RandomizationKind::LmsWithDigitalShift, seed)).unwrap(),
            lattice_points(gen, d, 0, 512, Ordering::Natural, Randomization::new(RandomizationKind::ShiftMod1, seed)).unwrap(),
            halton_points(d, 0, 512, Randomization::new(RandomizationKind::DigitShift, seed)).unwrap(),
        ];
        for b in &blocks {
            prop_assert!(b.values().iter().all(|&v| (0.0..1.0).contains(&v)));
        }
    }

    #[test]
    fn lattice_group_law(i in 0usize..64, j in 0usize..64) {
        let gen = default_lattice_vector();
        let b = lattice_points(gen, 3, 0, 64, Ordering::Natural, Randomization::none()).unwrap();
        let s = lattice_add(b.row(i), b.row(j));
        prop_assert!(b.rows().any(|r| r == s.as_slice()));
        prop_assert_eq!(lattice_sub(&s, b.row(j)), b.row(i).to_vec());
    }

    #[test]
    fn quantile_is_monotone(a in 1e-12f64..1.0, b in 1e-12f64..1.0) {
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        prop_assert!(normal_quantile(lo) <= normal_quantile(hi));
    }

    #[test]
    fn matching_gaussian_weights_are_one(x in prop::collection::vec(1e-9f64..1.0 - 1e-9, 3), var in 0.1f64..10.0) {
        let ladder = TransformLadder::matching(isotropic_gaussian_transform(3, var).unwrap());
        let mut t = [0.0; 3];
        let mut scratch = vec![0.0; ladder.scratch_len()];
        prop_assert_eq!(ladder.apply(&x, &mut t, &mut scratch).unwrap(), 1.0);
    }

    #[test]
    fn csv_round_trip(values in prop::collection::vec(0.0f64..1.0, 0..40)) {
        let d = 2;
        let n = values.len() / d;
        let b = PointBlock::from_rows(values[..n * d].to_vec(), d);
        let back = parse_points_csv(&points_csv(&b)).unwrap();
        prop_assert_eq!(back.values(), b.values());
        prop_assert_eq!(back.d(), d);
    }
}
