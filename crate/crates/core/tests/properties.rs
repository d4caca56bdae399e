use proptest::prelude::*;
use rateladder::codec::{
    bp_decode, encode_syndrome, ldpca_accumulate, ldpca_deaccumulate, DecoderConfig, LdpcaCode,
};
use rateladder::gf2::{parse_alist, to_alist, BinaryMatrix, BitVector};
use rateladder::graph::{count_4cycles, peg_lift, realized_protograph, CycleCounter};
use rateladder::ladder::{build_cprime, proto_circle, reconstruct_syndrome, verify_rate_adaptive, Rate};
use rateladder::protograph::{extend_protograph, fold_protograph, proto_product, Protograph};

fn matrix(max_rows: usize, max_cols: usize) -> impl Strategy<Value = BinaryMatrix> {
    (1..=max_rows, 2..=max_cols).prop_flat_map(|(m, n)| {
        prop::collection::vec(prop::collection::btree_set(0..n, 1..=n.min(6)), m)
            .prop_map(move |rows| BinaryMatrix::new(n, rows.into_iter().map(|r| r.into_iter().collect()).collect()).unwrap())
    })
}

fn bits(len: usize) -> impl Strategy<Value = BitVector> {
    prop::collection::vec(0u8..=1, len).prop_map(|b| BitVector::from_bits(&b))
}

fn extended() -> Protograph {
    Protograph::new(vec![
        vec![1, 1, 1, 2, 0, 1, 0, 1],
        vec![0, 1, 0, 1, 1, 1, 1, 2],
        vec![1, 0, 1, 4, 0, 0, 1, 1],
        vec![0, 0, 1, 1, 1, 0, 1, 4],
    ])
    .unwrap()
}

proptest! {
    #[test]
    fn alist_round_trip(h in matrix(12, 24)) {
        prop_assert_eq!(parse_alist(&to_alist(&h)).unwrap(), h);
    }

    #[test]
    fn product_transposes(a in matrix(8, 10), seed in any::<u64>()) {
        let b = {
            let cols = 1 + (seed % 9) as usize;
            let rows = (0..a.num_cols())
                .map(|i| (0..cols).filter(|j| (seed >> ((i * 7 + j) % 64)) & 1 == 1).collect())
                .collect();
            BinaryMatrix::new_allow_zero_rows(cols, rows).unwrap()
        };
        let ab = a.mul(&b).unwrap();
        prop_assert_eq!(ab.transpose(), b.transpose().mul(&a.transpose()).unwrap());
        prop_assert_eq!(a.rank(), a.transpose().rank());
        prop_assert!(ab.rank() <= a.rank().min(b.rank()));
    }

    #[test]
    fn cycle_count_ignores_order_and_matches_counter(h in matrix(10, 16), rot in 0usize..16) {
        let rows: Vec<usize> = (0..h.num_rows()).rev().collect();
        let cols: Vec<usize> = (0..h.num_cols()).map(|j| (j + rot) % h.num_cols()).collect();
        let shuffled = h.select_rows(&rows).permute_cols(&cols);
        prop_assert_eq!(count_4cycles(&shuffled), count_4cycles(&h));
        let mut counter = CycleCounter::new(h.num_cols());
        for r in h.rows() {
            counter.insert(r.to_vec());
        }
        prop_assert_eq!(counter.total(), count_4cycles(&h));
    }

    #[test]
    fn accumulation_is_an_involution(c in (1usize..80).prop_flat_map(bits)) {
        prop_assert_eq!(ldpca_deaccumulate(&ldpca_accumulate(&c)), c.clone());
        prop_assert_eq!(ldpca_accumulate(&ldpca_deaccumulate(&c)), c);
    }

    #[test]
    fn rate_text_round_trip(num in 0usize..500, extra in 1usize..500) {
        let r = Rate::new(num, num + extra).unwrap();
        prop_assert_eq!(r.to_string().parse::<Rate>().unwrap(), r);
    }

    #[test]
    fn extension_folds_back(z_e in 1usize..5, seed in any::<u64>()) {
        let s = Protograph::new(vec![vec![1, 2, 1, 3], vec![1, 0, 2, 5]]).unwrap();
        let ext = extend_protograph(&s, z_e, seed).unwrap();
        prop_assert_eq!(ext.column_degrees().iter().sum::<u32>(), s.column_degrees().iter().sum::<u32>() * z_e as u32);
        prop_assert_eq!(fold_protograph(&ext, z_e, 2, 4).unwrap(), s);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn merged_codes_are_rate_adaptive(seed in any::<u64>(), x_seed in any::<u64>()) {
        let s1 = extended();
        let h1 = peg_lift(&s1, 24, seed).unwrap();
        let s_int = Protograph::new(vec![vec![1, 0, 1, 0], vec![0, 1, 0, 0], vec![0, 0, 0, 1]]).unwrap();
        let out = proto_circle(&h1, &s_int, 8, 2, seed).unwrap();
        let h_int = out.intermediate.matrix();
        prop_assert_eq!(&out.daughter.matrix, &h_int.mul(&h1.matrix).unwrap());
        prop_assert_eq!(realized_protograph(&out.daughter).unwrap(), proto_product(&s_int, &s1).unwrap());
        let cprime = build_cprime(h_int);
        prop_assert!(verify_rate_adaptive(&h1.matrix, h_int, &cprime));
        let mut rng = rateladder::rng::rng_from(x_seed);
        let x = BitVector::random(h1.matrix.num_cols(), 0.5, &mut rng);
        let c = h1.matrix.mat_vec(&x).unwrap();
        let u = out.daughter.matrix.mat_vec(&x).unwrap();
        prop_assert_eq!(reconstruct_syndrome(h_int, &cprime, &u, &c.select(&cprime)).unwrap(), c);
    }

    #[test]
    fn ldpca_syndrome_matches_merged_matrix(seed in any::<u64>(), x_seed in any::<u64>(), target in 8usize..48) {
        let h1 = peg_lift(&extended(), 12, seed).unwrap().matrix;
        let code = LdpcaCode::new(h1.clone(), &[target]).unwrap();
        let mut rng = rateladder::rng::rng_from(x_seed);
        let x = BitVector::random(h1.num_cols(), 0.5, &mut rng);
        prop_assert_eq!(code.syndrome(target, &x).unwrap(), code.merged(target).unwrap().mat_vec(&x).unwrap());
    }

    #[test]
    fn decoding_commutes_with_the_coset_shift(seed in any::<u64>()) {
        let h = peg_lift(&extended(), 16, seed).unwrap().matrix;
        let mut rng = rateladder::rng::rng_from(seed);
        let x = BitVector::random(h.num_cols(), 0.5, &mut rng);
        let noise = BitVector::random(h.num_cols(), 0.05, &mut rng);
        let cfg = DecoderConfig::default();
        let a = bp_decode(&h, &encode_syndrome(&h, &x).unwrap(), &x.xor(&noise), 0.05, cfg).unwrap();
        let zero = BitVector::zeros(h.num_rows());
        let b = bp_decode(&h, &zero, &noise, 0.05, cfg).unwrap();
        prop_assert_eq!(a.x_hat.xor(&x), b.x_hat);
        prop_assert_eq!(a.iterations, b.iterations);
    }
}
