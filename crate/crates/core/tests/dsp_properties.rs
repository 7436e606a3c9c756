use std::f64::consts::PI;

use num_complex::Complex64;
use oisac::dsp::*;
use oisac::harness::q_function;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

fn direct_dft(x: &[Complex64], sign: f64) -> Vec<Complex64> {
    let n = x.len();
    (0..n)
        .map(|k| {
            x.iter()
                .enumerate()
                .map(|(t, v)| v * Complex64::from_polar(1.0, sign * 2.0 * PI * (k * t % n) as f64 / n as f64))
                .sum::<Complex64>()
                / (n as f64).sqrt()
        })
        .collect()
}

fn frame(v: Vec<Complex64>) -> ComplexFrame {
    ComplexFrame::new(v, 1.0).unwrap()
}

fn complex_vec(len: usize) -> impl Strategy<Value = Vec<Complex64>> {
    prop::collection::vec((-1e3f64..1e3, -1e3f64..1e3), len).prop_map(|v| v.into_iter().map(|(a, b)| Complex64::new(a, b)).collect())
}

#[test]
fn dft_matches_direct_sum_up_to_64() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for n in [1usize, 2, 4, 8, 16, 32, 64] {
        let x: Vec<Complex64> = (0..n).map(|_| Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))).collect();
        for (dir, sign) in [(Direction::Forward, -1.0), (Direction::Inverse, 1.0)] {
            let got = dft(&frame(x.clone()), dir).unwrap();
            for (g, w) in got.samples().iter().zip(direct_dft(&x, sign)) {
                assert!((g - w).norm() < 1e-9, "n={n}");
            }
        }
    }
}

proptest! {
    #[test]
    fn dft_round_trip_and_parseval(exp in 0u32..11, seed in any::<u64>()) {
        let n = 1usize << exp;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x: Vec<Complex64> = (0..n).map(|_| Complex64::new(rng.random_range(-5.0..5.0), rng.random_range(-5.0..5.0))).collect();
        let spec = dft(&frame(x.clone()), Direction::Forward).unwrap();
        let back = dft(&spec, Direction::Inverse).unwrap();
        let inf = x.iter().map(|v| v.norm()).fold(0.0, f64::max);
        for (a, b) in back.samples().iter().zip(&x) {
            prop_assert!((a - b).norm() <= 1e-9 * inf.max(1e-300));
        }
        let et: f64 = x.iter().map(|v| v.norm_sqr()).sum();
        let ef: f64 = spec.samples().iter().map(|v| v.norm_sqr()).sum();
        prop_assert!((et - ef).abs() <= 1e-9 * et.max(1e-300));
    }

    #[test]
    fn small_frames_match_direct_sum(x in (0u32..7).prop_flat_map(|e| complex_vec(1 << e))) {
        let got = dft(&frame(x.clone()), Direction::Forward).unwrap();
        let scale = x.iter().map(|v| v.norm()).sum::<f64>().max(1.0);
        for (g, w) in got.samples().iter().zip(direct_dft(&x, -1.0)) {
            prop_assert!((g - w).norm() <= 1e-12 * scale);
        }
    }

    #[test]
    fn biasing_never_goes_negative(x in prop::collection::vec(-10.0f64..10.0, 1..200), kappa in 0.0f64..6.0) {
        let (y, _) = dc_bias_and_clip(&RealWaveform::new(x, 1.0).unwrap(), kappa).unwrap();
        prop_assert!(y.samples().iter().all(|&v| v >= 0.0));
    }

    #[test]
    fn enough_bias_is_a_pure_shift(x in prop::collection::vec(-10.0f64..10.0, 2..200)) {
        let w = RealWaveform::new(x.clone(), 1.0).unwrap();
        let sigma = w.variance().sqrt();
        prop_assume!(sigma > 1e-6);
        let min = x.iter().cloned().fold(f64::INFINITY, f64::min);
        let kappa = (-min / sigma).max(0.0) + 0.01;
        let (y, stats) = dc_bias_and_clip(&w, kappa).unwrap();
        prop_assert_eq!(stats.clipped_fraction, 0.0);
        for (a, b) in y.samples().iter().zip(&x) {
            prop_assert_eq!(*a, b + stats.bias);
        }
    }
}

#[test]
fn hilbert_has_no_negative_frequencies() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for n in [64usize, 256, 1024] {
        // Band-limited: random tones strictly inside (0, n/2).
        let mut x = vec![0.0; n];
        for _ in 0..10 {
            let k = rng.random_range(1..n / 2) as f64;
            let (a, ph): (f64, f64) = (rng.random(), rng.random_range(0.0..2.0 * PI));
            for (t, v) in x.iter_mut().enumerate() {
                *v += a * (2.0 * PI * k * t as f64 / n as f64 + ph).cos();
            }
        }
        let z = hilbert_analytic(&RealWaveform::new(x.clone(), 1.0).unwrap()).unwrap();
        for (a, b) in z.samples().iter().zip(&x) {
            assert_eq!(a.re, *b);
        }
        let spec = direct_dft(z.samples(), -1.0);
        let total: f64 = spec.iter().map(|c| c.norm_sqr()).sum();
        let neg: f64 = spec[n / 2 + 1..].iter().map(|c| c.norm_sqr()).sum();
        assert!(neg / total < 1e-12, "n={n}: {}", neg / total);
    }
}

#[test]
fn msequences_are_balanced_with_two_valued_autocorrelation() {
    for m in 2..=10u32 {
        let bits = msequence(m).unwrap();
        let n = bits.len();
        assert_eq!(n, (1 << m) - 1);
        assert_eq!(bits.iter().filter(|&&b| b).count(), 1 << (m - 1));
        let s = bipolar(&bits);
        for lag in 0..n {
            let r: f64 = (0..n).map(|i| s[i] * s[(i + lag) % n]).sum();
            assert_eq!(r, if lag == 0 { n as f64 } else { -1.0 }, "m={m} lag={lag}");
        }
    }
}

#[test]
fn gaussian_clip_fraction_matches_tail_probability() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    let x: Vec<f64> = (0..1_000_000).map(|_| rng.sample(StandardNormal)).collect();
    let (_, stats) = dc_bias_and_clip(&RealWaveform::new(x, 1.0).unwrap(), 3.0).unwrap();
    let want = q_function(3.0);
    assert!((stats.clipped_fraction - want).abs() < 0.2 * want, "{}", stats.clipped_fraction);
}

#[test]
fn correlation_peak_matches_direct_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    let m = 300;
    let t: Vec<Complex64> = (0..m).map(|_| Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))).collect();
    for (delay, gain) in [(0usize, 1.0), (100, 1.0), (100, 0.3)] {
        let mut rx = vec![Complex64::new(0.0, 0.0); m + 128];
        for (i, v) in t.iter().enumerate() {
            rx[i + delay] = gain * v;
        }
        let corr = cross_correlate(&frame(rx.clone()), &frame(t.clone())).unwrap();
        let oracle: Vec<f64> = (0..=rx.len() - m)
            .map(|l| (0..m).map(|i| rx[l + i] * t[i].conj()).sum::<Complex64>().norm())
            .collect();
        assert_eq!(corr.lags.len(), oracle.len());
        for (a, b) in corr.magnitudes.iter().zip(&oracle) {
            assert!((a - b).abs() < 1e-8 * b.max(1.0));
        }
        assert_eq!(corr.peak().0, delay);
    }
}

#[test]
fn streams_do_not_depend_on_thread_count() {
    let draw = |threads: usize| {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
        pool.install(|| {
            use rayon::prelude::*;
            (0..64u64)
                .into_par_iter()
                .map(|t| SeedSpec::new(5, 1, t, StreamRole::CommNoise).rng().random::<u64>())
                .collect::<Vec<_>>()
        })
    };
    let one = draw(1);
    assert_eq!(one, draw(4));
    assert_eq!(one, draw(8));
}
