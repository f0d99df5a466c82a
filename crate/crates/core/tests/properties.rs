use ccdm::analysis::{dos, dos_reduction, measured_dos, nb_input_length, DosScheme};
use ccdm::architectures::{
    bl_demap, bl_map, pa_best_ordering, pa_demap, pa_map, pa_split, BlPlan, ComponentDms,
};
use ccdm::exactint::multinomial;
use ccdm::{BinaryCodec, BitWord, Composition, Order};
use num_bigint::BigUint;
use proptest::prelude::*;

fn bits(len: u64) -> impl Strategy<Value = BitWord> {
    proptest::collection::vec(any::<bool>(), len as usize).prop_map(BitWord::new)
}

fn composition(max_m: usize, max_n: usize) -> impl Strategy<Value = Composition> {
    proptest::collection::vec(0..=max_n / max_m, 1..=max_m)
        .prop_filter("nonempty block", |c| c.iter().sum::<usize>() > 0)
        .prop_map(|c| Composition::new(c).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn sr_roundtrip_and_serialism((n, w, lex) in (1usize..=200).prop_flat_map(|n| (Just(n), 0..=n, any::<bool>())),
                                  seed in any::<u64>()) {
        let order = if lex { Order::Lex } else { Order::Colex };
        let codec = BinaryCodec::with_order(n, w, order).unwrap();
        let k = codec.k() as usize;
        let mut state = seed;
        let u = BitWord::new((0..k).map(|_| {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            state >> 63 == 1
        }).collect());
        let x = codec.map(&u).unwrap();
        prop_assert_eq!(x.composition().counts(), &[w, n - w][..]);
        prop_assert_eq!(codec.demap(&x).unwrap(), u.clone());
        let measured = measured_dos(&codec, &u).unwrap();
        let bound = dos(DosScheme::Sr, n, w as u64).unwrap();
        prop_assert!(measured.map_dos <= bound.map_dos);
        prop_assert!(measured.demap_dos <= bound.demap_dos);
    }

    #[test]
    fn every_ordering_factors_the_multinomial(c in composition(5, 40), shuffle in any::<u64>()) {
        let m = c.m();
        let mut ordering: Vec<usize> = (0..m).collect();
        let mut s = shuffle;
        for i in (1..m).rev() {
            ordering.swap(i, (s % (i as u64 + 1)) as usize);
            s /= i as u64 + 1;
        }
        let plan = pa_split(&c, &ordering).unwrap();
        let product: BigUint = plan.stages().iter().map(|st| st.binomial.clone()).product();
        prop_assert_eq!(product, multinomial(&c));
        prop_assert!(plan.total_k() <= nb_input_length(&c).unwrap());
    }

    #[test]
    fn best_ordering_loses_at_most_m_minus_two(c in composition(5, 40)) {
        let nb = nb_input_length(&c).unwrap();
        let best = pa_best_ordering(&c).unwrap().plan.total_k();
        prop_assert!(best <= nb);
        prop_assert!(nb - best <= c.m().saturating_sub(2) as u64);
    }

    #[test]
    fn pa_roundtrip((c, u) in composition(5, 60).prop_flat_map(|c| {
        let k = pa_best_ordering(&c).unwrap().plan.total_k();
        (Just(c), bits(k))
    })) {
        let plan = pa_best_ordering(&c).unwrap().plan;
        let x = pa_map(&plan, &u).unwrap();
        prop_assert_eq!(x.composition(), &c);
        prop_assert_eq!(pa_demap(&plan, &x).unwrap(), u);
    }

    #[test]
    fn bl_roundtrip_realizes_levels((n, zeros) in (1usize..=64).prop_flat_map(|n| {
        (Just(n), proptest::collection::vec(0..=n, 1..=3))
    }), seed in any::<u64>()) {
        let plan = BlPlan::from_zeros(n, &zeros).unwrap();
        let k = plan.total_k() as usize;
        let u = BitWord::new((0..k).map(|i| (seed.rotate_left(i as u32) & 1) == 1).collect());
        let x = bl_map(&plan, &u).unwrap();
        let depth = zeros.len();
        for (l, &z) in zeros.iter().enumerate() {
            let got = x.symbols().iter().filter(|&&s| (s >> (depth - 1 - l)) & 1 == 0).count();
            prop_assert_eq!(got, z);
        }
        prop_assert_eq!(bl_demap(&plan, &x).unwrap(), u);
    }

    #[test]
    fn reduction_is_symmetric((n, w) in (1usize..=300).prop_flat_map(|n| (Just(n), 0..=n))) {
        prop_assert_eq!(dos_reduction(n, w).unwrap(), dos_reduction(n, n - w).unwrap());
    }
}

#[test]
fn single_stage_plan_matches_codec() {
    let c = Composition::new(vec![64, 36]).unwrap();
    let plan = pa_split(&c, &[0, 1]).unwrap();
    let worst = plan.worst_component().unwrap();
    assert_eq!((worst.n, worst.w, worst.serial_weight()), (100, 64, 36));
    assert_eq!(plan.total_k(), BinaryCodec::new(100, 64).unwrap().k());
}
