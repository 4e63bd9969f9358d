//! Estimator-versus-oracle checks shared by the property tests and the
//! acceptance suite.

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use triadic_net::graph::{
    random_log, DegreeKind, EventLog, ItemId, Link, LinkClass, RandomLogSpec, Time, UserId,
};
use triadic_net::measures::*;

use super::*;

pub const EPS: f64 = 1e-12;

fn trimmed(v: &[u64]) -> Vec<u64> {
    let mut v = v.to_vec();
    while v.last() == Some(&0) {
        v.pop();
    }
    v
}

fn close(a: &[f64], b: &[f64]) -> bool {
    a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).abs() < EPS)
}

pub fn draw_log(seed: u64, directed: bool) -> EventLog {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let events = rng.random_range(20..=200);
    random_log(
        &mut rng,
        &RandomLogSpec {
            events,
            directed,
            tick_probability: 0.25,
            weights: [2, 2, 4, 4],
        },
    )
}

pub fn pairs(directed: bool) -> Vec<(DegreeKind, DegreeKind)> {
    use DegreeKind::*;
    let mut p = vec![
        (Favorite, Favorite),
        (Social, Favorite),
        (Favorite, Social),
        (Social, Social),
        (Popular, Popular),
    ];
    if directed {
        p.extend([
            (Out, Favorite),
            (In, Favorite),
            (Out, In),
            (In, Out),
            (Favorite, In),
        ]);
    }
    p
}

pub fn check_pa(log: &EventLog, seed: u64) -> Result<(), TestCaseError> {
    let (first, last) = (log.first_time().unwrap(), log.last_time().unwrap());
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5a5a);
    let dt: Time = rng.random_range(1..=3);
    if last - dt < first {
        return Ok(());
    }
    let t0s: Vec<Time> = (0..3)
        .map(|_| rng.random_range(first..=last - dt))
        .collect();
    let pairs = pairs(log.is_directed());
    let results = measure_pa_grid(log, &pairs, &t0s, dt).unwrap();
    for (&(x, y), est) in pairs.iter().zip(results) {
        let oracle = pa_oracle(log, x, y, &t0s, dt);
        match est {
            Err(MeasureError::EmptyWindow) => prop_assert!(oracle.used.is_empty()),
            Err(e) => return Err(TestCaseError::fail(format!("{e}"))),
            Ok(est) => {
                prop_assert_eq!(&est.t0_used, &oracle.used);
                prop_assert_eq!(&est.c, &oracle.c);
                prop_assert_eq!(&est.a_triadic, &oracle.a_t);
                prop_assert_eq!(&est.a_nontriadic, &oracle.a_n);
                prop_assert!(close(&est.pi_triadic, &oracle.pi_t));
                prop_assert!(close(&est.pi_nontriadic, &oracle.pi_n));
                prop_assert!(close(&est.kappa, &oracle.kappa));
                // normalization and monotonicity
                prop_assert!((est.pi.iter().sum::<f64>() - 1.0).abs() < 1e-9);
                prop_assert!(est.kappa.windows(2).all(|w| w[1] >= w[0] - EPS));
                prop_assert!((est.kappa.last().unwrap() - 1.0).abs() < 1e-9);
                let a = est.a();
                for k in 0..a.len() {
                    prop_assert_eq!(a[k], est.a_triadic[k] + est.a_nontriadic[k]);
                }
            }
        }
    }
    Ok(())
}

pub fn check_growth(log: &EventLog) -> Result<(), TestCaseError> {
    let (first, last) = (log.first_time().unwrap(), log.last_time().unwrap());
    if first == last {
        return Ok(());
    }
    let t0 = first + (last - first) / 3;
    for kind in [
        DegreeKind::Favorite,
        DegreeKind::Social,
        DegreeKind::Popular,
    ] {
        let est = growth_stats(log, kind, t0, last).unwrap();
        let oracle = growth_bins(&growth_samples(log, kind, t0, last));
        prop_assert_eq!(est.bins.len(), oracle.len());
        for (b, o) in est.bins.iter().zip(&oracle) {
            prop_assert_eq!(b.lo, 1u64 << o.0);
            prop_assert_eq!(b.count, o.1);
            prop_assert!((b.x_mean - o.2).abs() < EPS);
            prop_assert!((b.y_mean - o.3).abs() < EPS);
            prop_assert!((b.y_std - o.4).abs() < EPS);
            prop_assert!(b.y_std >= 0.0);
        }
    }
    Ok(())
}

pub fn check_influence(log: &EventLog) -> Result<(), TestCaseError> {
    let est = exposure_influence(log).unwrap();
    let (a, c) = exposure_oracle(log);
    prop_assert_eq!(trimmed(&est.a), trimmed(&a));
    prop_assert_eq!(trimmed(&est.c), trimmed(&c));
    prop_assert!(est.a.iter().zip(&est.c).all(|(a, c)| a <= c));

    let est = shared_favorites_influence(log).unwrap();
    let (a, c) = shared_oracle(log);
    prop_assert_eq!(trimmed(&est.a), trimmed(&a));
    prop_assert_eq!(trimmed(&est.c), trimmed(&c));
    prop_assert!(est.a.iter().zip(&est.c).all(|(a, c)| a <= c));
    prop_assert_eq!(est.a[0], 0);
    prop_assert_eq!(est.c[0], 0);
    Ok(())
}

pub fn check_static(log: &EventLog) -> Result<(), TestCaseError> {
    let g = log.final_graph().unwrap();
    let dense = replay(log, None, |_, _| {});
    if g.cross_link_count() > 0 {
        let nn = nn_degree_curves(&g).unwrap();
        let (users, items) = nn_oracle(&dense);
        let same = |a: &[Option<f64>], b: &[Option<f64>]| {
            a.len() == b.len()
                && a.iter().zip(b).all(|(x, y)| match (x, y) {
                    (Some(x), Some(y)) => (x - y).abs() < EPS,
                    (None, None) => true,
                    _ => false,
                })
        };
        prop_assert!(same(&nn.user_knn, &users));
        prop_assert!(same(&nn.item_knn, &items));
        for (i, v) in nn.user_knn.iter().enumerate() {
            if g.degrees(UserId(i as u32)).k_f >= 1 {
                prop_assert!(v.unwrap() >= 1.0);
            }
        }
    }
    let counts = triadic_counts(log).unwrap();
    let o = triadic_oracle(log);
    prop_assert_eq!(
        (
            counts.social_triadic,
            counts.social_total,
            counts.cross_triadic,
            counts.cross_total
        ),
        o
    );
    if o.1 == 0 {
        prop_assert!(matches!(
            triadic_fraction(log, LinkClass::Social),
            Err(MeasureError::EmptyClass(LinkClass::Social))
        ));
    }
    use DegreeKind::*;
    for (a, b) in [(Social, Favorite), (In, Out), (Favorite, Total)] {
        match (degree_pcc(&g, a, b), degree_pcc(&g, b, a)) {
            (Ok(r), Ok(s)) => {
                prop_assert!((-1.0..=1.0).contains(&r));
                prop_assert_eq!(r, s);
            }
            (Err(_), Err(_)) => {}
            other => return Err(TestCaseError::fail(format!("asymmetric {other:?}"))),
        }
    }
    Ok(())
}

/// Compares link classification against triangle counting for `tries`
/// random prospective links; returns how many were admissible and checked.
pub fn check_classification(
    log: &EventLog,
    seed: u64,
    tries: usize,
) -> Result<usize, TestCaseError> {
    let g = log.final_graph().unwrap();
    let dense = replay(log, None, |_, _| {});
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut checked = 0;
    for _ in 0..tries {
        if dense.users < 2 {
            break;
        }
        let a = rng.random_range(0..dense.users);
        let social = dense.items == 0 || rng.random_bool(0.5);
        let b = if social {
            rng.random_range(0..dense.users)
        } else {
            rng.random_range(0..dense.items)
        };
        let fl = FlatLink {
            time: 0,
            social,
            a,
            b,
            explicit: true,
            seq: 0,
        };
        let link = if social {
            if a == b || dense.s[a][b] {
                continue;
            }
            Link::Social {
                src: UserId(a as u32),
                dst: UserId(b as u32),
            }
        } else {
            if dense.c[a][b] {
                continue;
            }
            Link::Cross {
                user: UserId(a as u32),
                item: ItemId(b as u32),
            }
        };
        prop_assert_eq!(
            g.closes_triangle(&link),
            dense.closes_triangle_by_count(&fl)
        );
        checked += 1;
    }
    Ok(checked)
}
