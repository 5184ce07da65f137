use ablab::dimension::recheck_gaps;
use ablab::orbit::balance_classify;
use ablab::wire::DecRat;
use ablab::{
    extract_separated_subset, gen_omega, make_number, CfNumber, DiophantineSpec, Error,
    SeparationParams, Strategy, WindowPick,
};
use num_bigint::BigInt;
use num_rational::BigRational;

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn tau6() -> CfNumber {
    make_number(&DiophantineSpec::finite(rat(6, 1), vec![BigInt::from(2)]).unwrap())
}

fn params(l: usize, c: BigRational, pick: WindowPick) -> SeparationParams {
    SeparationParams {
        tau1: rat(2, 1),
        tau2: rat(6, 1),
        epsilon: rat(1, 4),
        l,
        c,
        pick,
    }
}

/// Pigeonhole and soundness on every successful extraction for a few words.
#[test]
fn certificates_hold_across_words() {
    let words = [
        Strategy::Alternating,
        Strategy::Periodic {
            pattern: "ABB".into(),
        },
        Strategy::Periodic {
            pattern: "AAB".into(),
        },
        Strategy::Bernoulli {
            p: DecRat(rat(1, 2)),
        },
    ];
    let alpha = CfNumber::golden();
    let beta = tau6();
    let mut verified = 0;
    for s in &words {
        let omega = gen_omega(s, 12_000, 11).unwrap();
        let balance = balance_classify(&omega, 1200).unwrap();
        let c = balance.default_c().expect("balanced");
        for l in 1..=2 {
            for pick in [WindowPick::Smallest, WindowPick::Largest] {
                match extract_separated_subset(&alpha, &beta, &omega, &params(l, c.clone(), pick)) {
                    Ok(w) => {
                        assert!(w.is_verified());
                        assert!(w.pigeonhole_holds, "{s:?} l={l}");
                        assert!(w.box_count_consistent);
                        let q = w.q_l.clone();
                        assert!(w
                            .members
                            .iter()
                            .all(|&(_, k)| BigInt::from(k) % &q == BigInt::from(w.p_prime)));
                        let finer =
                            recheck_gaps(&alpha, &beta, &w.members, &(&w.cert_width / rat(4, 1)))
                                .unwrap();
                        if let Some(g) = finer {
                            assert!(g >= w.gap_threshold);
                        }
                        verified += 1;
                    }
                    Err(Error::SeparationFailed { j, j_prime, .. }) => assert!(j < j_prime),
                    Err(e) => panic!("{s:?} l={l}: {e}"),
                }
            }
        }
    }
    assert!(verified >= 4);
}

#[test]
fn smallest_pick_at_l2() {
    let omega = gen_omega(&Strategy::Alternating, 12_000, 0).unwrap();
    let w = extract_separated_subset(
        &CfNumber::golden(),
        &tau6(),
        &omega,
        &params(2, rat(3, 1), WindowPick::Smallest),
    )
    .unwrap();
    assert_eq!(w.q_l_prime, BigInt::from(2584));
    assert_eq!(w.members.len(), 40);
    assert!(w.dim_datapoint_approx < 2.0 / 3.0 - 0.25);
}

#[test]
fn precision_exhausted_for_short_literal_beta() {
    let beta = CfNumber::literal_u64(&[2, 16, 1_185_921, 3, 4, 5, 6, 7, 8, 9]).unwrap();
    let omega = gen_omega(&Strategy::Alternating, 100, 0).unwrap();
    let r = extract_separated_subset(
        &CfNumber::golden(),
        &beta,
        &omega,
        &params(3, rat(3, 1), WindowPick::Largest),
    );
    assert!(matches!(r, Err(Error::PrecisionExhausted(_))), "{r:?}");
}
