use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use secure_ia::channel::{draw_channels, ChannelSet, SystemConfig};
use secure_ia::ia::{run_scheme, IaOptions, IaSolution, Scheme};
use secure_ia::metrics::{eave_rate, ia_diagnostics, legit_rate, secrecy_report};
use secure_ia::numerics::{CMatrix, Orthonormal, C64};

fn gaussian(rows: usize, cols: usize, seed: u64) -> CMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    CMatrix::from_fn(rows, cols, |_, _| {
        let re: f64 = StandardNormal.sample(&mut rng);
        let im: f64 = StandardNormal.sample(&mut rng);
        C64::new(re, im)
    })
}

/// `log₂|I + S·R⁻¹|` with an explicit inverse and determinant.
fn rate_by_inverse(desired: &CMatrix, interference: &[CMatrix], noise: f64) -> f64 {
    let n = desired.nrows();
    let mut r = CMatrix::identity(n, n) * C64::new(noise, 0.0);
    for hf in interference {
        r += hf * hf.adjoint();
    }
    let s = desired * desired.adjoint();
    let m = CMatrix::identity(n, n) + s * r.try_inverse().unwrap();
    let det = m.determinant();
    assert!(
        det.im.abs() <= 1e-8 * det.re.abs(),
        "determinant should be real: {det}"
    );
    det.re.log2().max(0.0)
}

fn solved(cfg: &SystemConfig, scheme: Scheme, seed: u64) -> (ChannelSet, IaSolution) {
    let ch = draw_channels(cfg, seed);
    let opts = IaOptions {
        init_seed: seed,
        ..IaOptions::default()
    };
    let (sol, _) = run_scheme(scheme, &ch, cfg, &opts).unwrap();
    (ch, sol)
}

fn projector_out(u: &Orthonormal) -> CMatrix {
    let n = u.nrows();
    CMatrix::identity(n, n) - u.basis() * u.adjoint()
}

#[test]
fn rates_match_explicit_inverse() {
    let cfg = SystemConfig::new(3, 4, 3, 5, 2).unwrap();
    for seed in 0..10 {
        let ch = draw_channels(&cfg, seed);
        let f: Vec<CMatrix> = (0..3)
            .map(|l| gaussian(4, 2, 100 * seed + l) * C64::new(3.0, 0.0))
            .collect();
        for k in 0..3 {
            let others: Vec<usize> = (0..3).filter(|&l| l != k).collect();
            let legit_int: Vec<CMatrix> = others.iter().map(|&l| ch.link(k, l) * &f[l]).collect();
            let eve_int: Vec<CMatrix> =
                others.iter().map(|&l| ch.eavesdropper(l) * &f[l]).collect();
            let want = rate_by_inverse(&(ch.link(k, k) * &f[k]), &legit_int, 0.7);
            let got = legit_rate(&ch, &f, 0.7, k).unwrap();
            assert!(
                (got - want).abs() <= 1e-9 * want.max(1.0),
                "legit {got} vs {want}"
            );
            let want = rate_by_inverse(&(ch.eavesdropper(k) * &f[k]), &eve_int, 0.7);
            let got = eave_rate(&ch, &f, 0.7, k).unwrap();
            assert!(
                (got - want).abs() <= 1e-9 * want.max(1.0),
                "eve {got} vs {want}"
            );
        }
    }
}

#[test]
fn secrecy_report_is_consistent_with_rates() {
    let cfg = SystemConfig::new(3, 9, 9, 6, 3).unwrap().with_snr_db(20.0);
    for scheme in Scheme::ALL {
        let (ch, sol) = solved(&cfg, scheme, 4);
        let rep = secrecy_report(&ch, &sol, &cfg).unwrap();
        let mut total = 0.0;
        for k in 0..3 {
            let r = legit_rate(&ch, &sol.precoders, cfg.noise_var, k).unwrap();
            let re = eave_rate(&ch, &sol.precoders, cfg.noise_var, k).unwrap();
            assert_eq!(rep.legit[k], r);
            assert_eq!(rep.eavesdropper[k], re);
            let s = if r > re { r - re } else { 0.0 };
            assert_eq!(rep.secrecy[k], s);
            total += s;
        }
        assert!((rep.ssr - total).abs() <= 1e-12 * total.max(1.0));
    }
}

#[test]
fn diagnostics_match_brute_force() {
    let cfg = SystemConfig::new(3, 9, 9, 6, 3).unwrap().with_snr_db(10.0);
    for scheme in Scheme::ALL {
        let (ch, sol) = solved(&cfg, scheme, 9);
        let diag = ia_diagnostics(&ch, &sol, &cfg).unwrap();
        for k in 0..3 {
            let p = projector_out(&sol.interference_bases[k]);
            let energy: f64 = (0..3)
                .filter(|&l| l != k)
                .map(|l| (&p * ch.link(k, l) * &sol.precoders[l]).norm_squared())
                .sum();
            assert!((diag.imli_residual[k] - energy.sqrt()).abs() <= 1e-9 * (1.0 + energy.sqrt()));
            let sv = (&p * ch.link(k, k) * &sol.precoders[k]).singular_values();
            let mut sv: Vec<f64> = sv.iter().copied().collect();
            sv.sort_by(|a, b| b.total_cmp(a));
            let margin = sv[2] / sv[0];
            assert!((diag.rank_margin[k] - margin).abs() <= 1e-9, "{scheme}");
        }
        for l in 0..3 {
            let hf = ch.eavesdropper(l) * &sol.precoders[l];
            let want = match scheme {
                Scheme::Wslm => (projector_out(sol.eve_basis.as_ref().unwrap()) * hf).norm(),
                _ => hf.norm(),
            };
            assert!(
                (diag.wiretap_leakage[l] - want).abs() <= 1e-9 * (1.0 + want),
                "{scheme}"
            );
        }
    }
}

#[test]
fn zfws_starves_the_eavesdropper() {
    for name in [(3, 9, 9, 6, 3), (3, 15, 15, 9, 3), (3, 6, 6, 4, 2)] {
        let (k, m, n, ne, d) = name;
        let cfg = SystemConfig::new(k, m, n, ne, d).unwrap().with_snr_db(50.0);
        for seed in 0..5 {
            let (ch, sol) = solved(&cfg, Scheme::Zfws, seed);
            let rep = secrecy_report(&ch, &sol, &cfg).unwrap();
            for re in rep.eavesdropper {
                assert!(re <= 1e-6, "{cfg} seed {seed}: {re}");
            }
        }
    }
}

#[test]
fn relabeling_users_permutes_rates() {
    let cfg = SystemConfig::new(3, 5, 4, 3, 2).unwrap().with_snr_db(15.0);
    let ch = draw_channels(&cfg, 21);
    let f: Vec<CMatrix> = (0..3)
        .map(|l| gaussian(5, 2, 300 + l) * C64::new(2.0, 0.0))
        .collect();
    let perm = [2usize, 0, 1];
    let mut links = Vec::new();
    for rx in 0..=3 {
        for tx in 0..3 {
            let src_rx = if rx < 3 { perm[rx] } else { 3 };
            links.push(ch.link(src_rx, perm[tx]).clone());
        }
    }
    let ch_p = ChannelSet::from_links(&cfg, links).unwrap();
    let f_p: Vec<CMatrix> = perm.iter().map(|&p| f[p].clone()).collect();
    for (k, &src) in perm.iter().enumerate() {
        let a = legit_rate(&ch_p, &f_p, cfg.noise_var, k).unwrap();
        let b = legit_rate(&ch, &f, cfg.noise_var, src).unwrap();
        assert!((a - b).abs() <= 1e-10 * b.max(1.0));
        let a = eave_rate(&ch_p, &f_p, cfg.noise_var, k).unwrap();
        let b = eave_rate(&ch, &f, cfg.noise_var, src).unwrap();
        assert!((a - b).abs() <= 1e-10 * b.max(1.0));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn rates_are_finite_and_nonnegative(seed in any::<u64>(), snr in -10.0f64..60.0) {
        let cfg = SystemConfig::new(2, 3, 3, 4, 2).unwrap().with_snr_db(snr);
        let ch = draw_channels(&cfg, seed);
        let p = C64::new((cfg.tx_power / 2.0).sqrt(), 0.0);
        let f: Vec<CMatrix> = (0..2).map(|l| gaussian(3, 2, seed ^ l).qr().q() * p).collect();
        for k in 0..2 {
            let r = legit_rate(&ch, &f, cfg.noise_var, k).unwrap();
            let re = eave_rate(&ch, &f, cfg.noise_var, k).unwrap();
            prop_assert!(r.is_finite() && r >= 0.0);
            prop_assert!(re.is_finite() && re >= 0.0);
        }
    }
}
