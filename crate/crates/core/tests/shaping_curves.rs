use ccdm::analysis::nb_input_length;
use ccdm::matchers::NbEnumCodec;
use ccdm::shaping::{air_bmd, mb_pmf, mb_select, quantize_pmf, rate_loss, ChannelPoint};
use ccdm::{BitWord, Composition};

#[test]
fn rate_loss_vanishes_with_block_length() {
    let pmf = mb_pmf(4, mb_select(&ChannelPoint::new(13.0, 4)).unwrap()).unwrap();
    let mut last: Option<(usize, f64)> = None;
    let mut n = 50;
    while n <= 1600 {
        let c = quantize_pmf(&pmf, n).unwrap();
        let loss = rate_loss(&c, nb_input_length(&c).unwrap()).rate_loss;
        assert!(loss >= 0.0);
        if let Some((prev_n, prev)) = last {
            assert!(
                loss <= prev + 1.0 / prev_n as f64,
                "n={n}: {loss} after {prev}"
            );
        }
        last = Some((n, loss));
        n *= 2;
    }
    assert!(last.unwrap().1 < 0.01);
}

#[test]
fn air_nondecreasing_in_snr() {
    let pmf = mb_pmf(4, 0.04).unwrap();
    let mut prev = 0.0;
    for tenth in 0..=250 {
        let snr = tenth as f64 / 10.0;
        let air = air_bmd(&ChannelPoint::new(snr, 4), &pmf)
            .unwrap()
            .bits_per_2d;
        assert!(air >= prev - 1e-9, "{snr} dB: {air} < {prev}");
        prev = air;
    }
}

#[test]
fn shaping_beats_uniform_at_13_db() {
    let point = ChannelPoint::new(13.0, 4);
    let shaped = mb_pmf(4, mb_select(&point).unwrap()).unwrap();
    let uniform = mb_pmf(4, 0.0).unwrap();
    assert!(
        air_bmd(&point, &shaped).unwrap().bits_per_2d
            > air_bmd(&point, &uniform).unwrap().bits_per_2d
    );
}

#[test]
fn nb_codec_matches_sorted_enumeration() {
    fn perms(counts: &mut Vec<usize>, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if counts.iter().all(|&c| c == 0) {
            out.push(prefix.clone());
            return;
        }
        for s in 0..counts.len() {
            if counts[s] > 0 {
                counts[s] -= 1;
                prefix.push(s);
                perms(counts, prefix, out);
                prefix.pop();
                counts[s] += 1;
            }
        }
    }
    for counts in [vec![2, 1, 1], vec![3, 2], vec![2, 2, 2], vec![4, 3, 2, 1]] {
        let c = Composition::new(counts.clone()).unwrap();
        let mut all = Vec::new();
        perms(&mut counts.clone(), &mut Vec::new(), &mut all);
        let codec = NbEnumCodec::new(c).unwrap();
        for (i, seq) in all.iter().enumerate().take(1 << codec.k()) {
            let u = BitWord::from_u64(i as u64, codec.k() as usize).unwrap();
            let x = codec.map(&u).unwrap();
            assert_eq!(x.symbols(), &seq[..]);
            assert_eq!(codec.demap(&x).unwrap(), u);
        }
    }
}

#[test]
fn marginal_bl_levels_at_13_db() {
    let pmf = mb_pmf(4, mb_select(&ChannelPoint::new(13.0, 4)).unwrap()).unwrap();
    let plan = ccdm::architectures::bl_factorize(&pmf, 100).unwrap();
    let zeros: Vec<usize> = plan.levels().iter().map(|l| l.zeros).collect();
    assert_eq!(zeros[0], 78);
    assert!(zeros[1].abs_diff(61) <= 1, "{zeros:?}");
}
