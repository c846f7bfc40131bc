//! End-to-end acceptance run: one line per criterion, nonzero exit on failure.

use std::collections::BTreeMap;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use finsub::groupcoh::{bar_cochain_complex, group_cohomology, CoefficientAction};
use finsub::homology::{
    homology, homology_euler_characteristic, les_check_masks, normalized_complex, Coefficients,
    HomologyGroup,
};
use finsub::linalg::{smith_normal_form, SparseIntMatrix};
use finsub::simplicial::{sphere_model, torus_model, validate, SimplexRef, SimplicialSet};
use finsub::spectral::{filtered_from_tower, SpectralSequence};
use finsub::subsetspace::{conf_plus, exp, exp_bar, exp_based, tower, ConfModel, TowerVariant};
use finsub_cli::{Construction, Limits, SpaceSpec, Workbench};
use num_integer::Integer;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

type Outcome = Result<String, String>;

fn z() -> HomologyGroup {
    HomologyGroup::free(1)
}

fn zero() -> HomologyGroup {
    HomologyGroup::zero()
}

fn cyclic(k: u64) -> HomologyGroup {
    HomologyGroup::new(0, [k])
}

fn z_plus(k: u64) -> HomologyGroup {
    HomologyGroup::new(1, [k])
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn sphere(d: usize, n: usize) -> Result<Workbench, String> {
    Workbench::sphere(d, n).map_err(err)
}

fn groups(
    d: usize,
    n: usize,
    c: Construction,
    coeffs: Coefficients,
) -> Result<Vec<HomologyGroup>, String> {
    let wb = sphere(d, n)?;
    wb.homology(c, n, n * d, coeffs).map_err(err)
}

fn show(gs: &[HomologyGroup]) -> String {
    gs.iter()
        .map(|g| g.to_string())
        .collect::<Vec<_>>()
        .join(", ")
}

fn circle_suite() -> Outcome {
    let spheres = [(2, 1), (3, 3), (4, 3), (5, 5)];
    let mut seen = Vec::new();
    for (n, m) in spheres {
        let got = groups(1, n, Construction::Expn, Coefficients::Integer)?;
        let want: Vec<HomologyGroup> = (0..=n)
            .map(|k| if k == 0 || k == m { z() } else { zero() })
            .collect();
        ensure(got == want, || {
            format!("exp_{n} S^1: got ({}), want ({})", show(&got), show(&want))
        })?;
        seen.push(format!("n={n}:S^{m}"));
    }
    Ok(seen.join(" "))
}

fn tuffley(ns: &[usize]) -> Outcome {
    let mut seen = Vec::new();
    for &n in ns {
        let got = groups(2, n, Construction::Expn, Coefficients::Integer)?;
        let want_2n2 = if n == 2 { z() } else { z_plus(n as u64 - 1) };
        ensure(got[2 * n] == z(), || {
            format!("n={n}: H_{} = {}", 2 * n, got[2 * n])
        })?;
        ensure(got[2 * n - 1] == zero(), || {
            format!("n={n}: H_{} = {}", 2 * n - 1, got[2 * n - 1])
        })?;
        ensure(got[2 * n - 2] == want_2n2, || {
            format!("n={n}: H_{} = {}", 2 * n - 2, got[2 * n - 2])
        })?;
        let q = groups(2, n, Construction::Expn, Coefficients::Rational)?;
        for (k, g) in q.iter().enumerate().skip(1) {
            let expected = usize::from(k == 2 * n || k == 2 * n - 2);
            ensure(g.rank == expected, || {
                format!("n={n}: rational b_{k} = {}", g.rank)
            })?;
        }
        seen.push(format!("n={n}:H_{}={}", 2 * n - 2, got[2 * n - 2]));
    }
    Ok(seen.join(" "))
}

fn tuffley_timed() -> Outcome {
    let mut seen = Vec::new();
    for (ns, limit) in [
        (&[2usize, 3][..], Duration::from_secs(60)),
        (&[4][..], Duration::from_secs(30 * 60)),
    ] {
        let start = Instant::now();
        seen.push(tuffley(ns)?);
        let elapsed = start.elapsed();
        ensure(elapsed <= limit, || {
            format!(
                "n={ns:?} took {:.1}s, limit {}s",
                elapsed.as_secs_f64(),
                limit.as_secs()
            )
        })?;
    }
    Ok(seen.join(" "))
}

fn top_degrees_d2() -> Outcome {
    for n in 2..=4 {
        let h0 = group_cohomology(n, CoefficientAction::Trivial, 0).map_err(err)?;
        let h1 = group_cohomology(n, CoefficientAction::Trivial, 1).map_err(err)?;
        ensure(h0 == z() && h1 == zero(), || {
            format!("H^*(S_{n}, Z) low degrees: {h0}, {h1}")
        })?;
        let wb = sphere(2, n)?;
        let got = wb
            .homology_at(
                Construction::Expn,
                n,
                &[2 * n - 1, 2 * n],
                Coefficients::Integer,
            )
            .map_err(err)?;
        ensure(got[1] == h0, || {
            format!("n={n}: H_{} = {} vs {h0}", 2 * n, got[1])
        })?;
        ensure(got[0] == h1, || {
            format!("n={n}: H_{} = {} vs {h1}", 2 * n - 1, got[0])
        })?;
    }
    Ok("n=2,3,4".into())
}

fn model_agreement() -> Outcome {
    let cases = [(1, 2), (2, 2), (3, 2), (1, 3), (2, 3)];
    let mut seen = Vec::new();
    for (n, d) in cases {
        let wb = sphere(d, n)?;
        let top = n * d;
        let a = wb
            .homology(Construction::Conf, n, top, Coefficients::Integer)
            .map_err(err)?;
        let b = wb
            .homology(Construction::ConfBased, n, top, Coefficients::Integer)
            .map_err(err)?;
        ensure(a == b, || {
            format!("n={n} d={d}: ({}) vs ({})", show(&a), show(&b))
        })?;
        seen.push(format!("({n},{d})"));
    }
    let wb = Workbench::new(SpaceSpec::Torus, None, 2, Limits::default()).map_err(err)?;
    let a = wb
        .homology(Construction::Conf, 2, 4, Coefficients::Integer)
        .map_err(err)?;
    let b = wb
        .homology(Construction::ConfBased, 2, 4, Coefficients::Integer)
        .map_err(err)?;
    ensure(a == b, || {
        format!("torus n=2: ({}) vs ({})", show(&a), show(&b))
    })?;
    seen.push("torus".into());
    Ok(seen.join(" "))
}

fn duality_d3() -> Outcome {
    let got = groups(3, 2, Construction::Conf, Coefficients::Integer)?;
    let h1 = group_cohomology(2, CoefficientAction::Sign, 1).map_err(err)?;
    ensure(h1 == cyclic(2), || format!("H^1(S_2, sgn) = {h1}"))?;
    ensure(got[6] == zero() && got[5] == h1 && got[4] == z(), || {
        format!("C_2(R^3)^+: ({})", show(&got))
    })?;
    Ok(format!("H_4..6 = {}, {}, {}", got[4], got[5], got[6]))
}

fn connecting_map() -> Outcome {
    let mut seen = Vec::new();
    for n in [3usize, 4] {
        let wb = sphere(2, n)?;
        let map = wb.triple_connecting_map(n, 2 * n - 1).map_err(err)?;
        ensure(map.source.rank == 1 && map.target.rank == 1, || {
            format!("n={n}: free ranks {} -> {}", map.source, map.target)
        })?;
        let s = map.scalar();
        ensure(s == Some((n as u64 - 1).into()), || {
            format!("n={n}: |d| = {s:?}")
        })?;
        seen.push(format!("n={n}:{}", n - 1));
    }
    Ok(seen.join(" "))
}

fn limit_page(d: usize, n: usize) -> Result<BTreeMap<(usize, i64), usize>, String> {
    let t = tower(&sphere_model(d, n * d + 1), n, TowerVariant::Bar).map_err(err)?;
    let f = filtered_from_tower(&t).map_err(err)?;
    let mut ss = SpectralSequence::new(&f);
    Ok(ss.limit().dims.clone())
}

fn spectral_collapse() -> Outcome {
    for n in [2usize, 3] {
        let page = limit_page(2, n)?;
        let totals: Vec<i64> = page.keys().map(|&(p, q)| p as i64 + q).collect();
        ensure(
            !page.is_empty() && totals.iter().all(|&t| t == 2 * n as i64),
            || format!("S^2 n={n}: {page:?}"),
        )?;
    }
    let page = limit_page(3, 2)?;
    ensure(page.is_empty(), || format!("S^3 n=2: {page:?}"))?;
    Ok("S^2 n=2,3 at 2n; S^3 n=2 empty".into())
}

fn connectivity() -> Outcome {
    let cases = [
        (1, 2),
        (1, 3),
        (1, 4),
        (1, 5),
        (2, 2),
        (2, 3),
        (2, 4),
        (3, 2),
    ];
    let mut sharp = Vec::new();
    for (d, n) in cases {
        let got = groups(d, n, Construction::Expn, Coefficients::Integer)?;
        ensure(got[0] == z(), || format!("exp_{n} S^{d}: H_0 = {}", got[0]))?;
        for k in 1..=n + d - 3 {
            ensure(got[k] == zero(), || {
                format!("exp_{n} S^{d}: H_{k} = {}", got[k])
            })?;
        }
        if got[n + d - 2] != zero() {
            sharp.push(format!("exp_{n}S^{d}:H_{}={}", n + d - 2, got[n + d - 2]));
        }
    }
    Ok(format!(
        "vanishing through n+d-3; first nonzero at n+d-2 for {}",
        sharp.join(" ")
    ))
}

/// Invariant factors from determinantal divisors.
fn oracle_factors(m: &[Vec<i64>]) -> Vec<i128> {
    fn det(mut a: Vec<Vec<i128>>) -> i128 {
        let n = a.len();
        let (mut sign, mut prev) = (1, 1i128);
        for k in 0..n {
            if a[k][k] == 0 {
                match (k + 1..n).find(|&i| a[i][k] != 0) {
                    Some(i) => {
                        a.swap(i, k);
                        sign = -sign;
                    }
                    None => return 0,
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
                }
            }
            prev = a[k][k];
        }
        sign * a[n - 1][n - 1]
    }
    fn choose(n: usize, k: usize) -> Vec<Vec<usize>> {
        if k == 0 {
            return vec![vec![]];
        }
        if n < k {
            return vec![];
        }
        let mut out = choose(n - 1, k);
        out.extend(choose(n - 1, k - 1).into_iter().map(|mut s| {
            s.push(n - 1);
            s
        }));
        out
    }
    let (rows, cols) = (m.len(), m[0].len());
    let mut divisors = vec![1i128];
    for k in 1..=rows.min(cols) {
        let mut g = 0i128;
        for rs in choose(rows, k) {
            for cs in choose(cols, k) {
                g = g.gcd(&det(rs
                    .iter()
                    .map(|&r| cs.iter().map(|&c| m[r][c] as i128).collect())
                    .collect()));
            }
        }
        if g == 0 {
            break;
        }
        divisors.push(g);
    }
    divisors.windows(2).map(|w| w[1] / w[0]).collect()
}

fn check_space(x: &SimplicialSet) -> Result<(), String> {
    let report = validate(x);
    ensure(report.is_valid(), || {
        format!("{:?}", report.violations.first())
    })?;
    let top = x.trunc().saturating_sub(1);
    for reduced in [false, true] {
        let c = normalized_complex(x, reduced, top);
        ensure(c.square_zero_violation().is_none(), || "dd != 0".into())?;
        let full = normalized_complex(x, reduced, x.trunc());
        ensure(
            homology_euler_characteristic(&full) == full.euler_characteristic(),
            || "chi mismatch".into(),
        )?;
        let zr: Vec<usize> = homology(&c, Coefficients::Integer)
            .iter()
            .map(|g| g.rank)
            .collect();
        let qr: Vec<usize> = homology(&c, Coefficients::Rational)
            .iter()
            .map(|g| g.rank)
            .collect();
        ensure(zr == qr, || "integral and rational ranks differ".into())?;
    }
    Ok(())
}

fn property_suites() -> Outcome {
    let mut spaces = 0;
    for kind in 0..3 {
        for trunc in 1..=3 {
            let x = match kind {
                0 => sphere_model(1, trunc),
                1 => sphere_model(2, trunc),
                _ => torus_model(trunc),
            };
            check_space(&x.space)?;
            spaces += 1;
            for n in 1..=if kind == 2 { 2 } else { 3 } {
                let mut built = vec![exp(&x, n, trunc).map_err(err)?.space];
                let (based, incl) = exp_based(&x, n, trunc).map_err(err)?;
                let (bar, proj) = exp_bar(&x, n, trunc).map_err(err)?;
                ensure(
                    incl.validate().is_valid() && proj.validate().is_valid(),
                    || "structure map invalid".into(),
                )?;
                built.push(based.space);
                built.push(bar.space);
                for model in [ConfModel::Based, ConfModel::Bar] {
                    built.push(conf_plus(&x, n, model).map_err(err)?.space);
                }
                for s in built {
                    check_space(&s)?;
                    spaces += 1;
                }
            }
        }
    }
    for n in 1..=3 {
        for action in [CoefficientAction::Trivial, CoefficientAction::Sign] {
            let c = bar_cochain_complex(n, action, 2).map_err(err)?;
            ensure(c.square_zero_violation().is_none(), || {
                format!("bar cochains S_{n}: dd != 0")
            })?;
        }
    }

    let mut rng = StdRng::seed_from_u64(0x5eed);
    for _ in 0..500 {
        let (r, c) = (rng.gen_range(1..=8), rng.gen_range(1..=8));
        let m: Vec<Vec<i64>> = (0..r)
            .map(|_| {
                (0..c)
                    .map(|_| {
                        if rng.gen_bool(0.4) {
                            0
                        } else {
                            rng.gen_range(-10..=10)
                        }
                    })
                    .collect()
            })
            .collect();
        let got: Vec<i128> = smith_normal_form(&SparseIntMatrix::from_dense(&m))
            .factors
            .iter()
            .map(|f| i128::try_from(f).unwrap())
            .collect();
        ensure(got == oracle_factors(&m), || {
            format!("SNF of {m:?}: {got:?}")
        })?;
    }

    let circle = sphere_model(1, 4);
    let e = exp(&circle, 3, 4).map_err(err)?;
    for _ in 0..50 {
        let seeds: Vec<SimplexRef> = (0..rng.gen_range(0..5))
            .map(|_| {
                let k = rng.gen_range(0..=3);
                SimplexRef::new(k, rng.gen_range(0..e.space.level_size(k)))
            })
            .collect();
        let mask = e.space.closure(&seeds);
        let report = les_check_masks(&e.space, Some(&mask), 3).map_err(err)?;
        ensure(report.exact, || {
            format!("LES fails: {:?}", report.first_failure)
        })?;
    }
    Ok(format!("{spaces} spaces, 500 SNF matrices, 50 pairs"))
}

fn adjudication() -> Outcome {
    let got = groups(3, 2, Construction::Expn, Coefficients::Integer)?;
    let h4 = &got[4];
    let integral = group_cohomology(2, CoefficientAction::Sign, 2)
        .map_err(err)?
        .direct_sum(&z());
    Ok(format!(
        "H_4(exp_2 S^3) = {h4}; integral prediction {integral} {}; rational prediction rank 0 {}",
        if *h4 == integral { "holds" } else { "fails" },
        if h4.rank == 0 { "holds" } else { "fails" }
    ))
}

struct Criterion {
    id: u8,
    name: &'static str,
    limit: Duration,
    run: fn() -> Outcome,
    graded: bool,
}

fn main() -> ExitCode {
    let secs = Duration::from_secs;
    let criteria = [
        Criterion {
            id: 1,
            name: "circle suite",
            limit: secs(30),
            run: circle_suite,
            graded: true,
        },
        Criterion {
            id: 2,
            name: "S^2 table",
            limit: secs(30 * 60 + 60),
            run: tuffley_timed,
            graded: true,
        },
        Criterion {
            id: 3,
            name: "top degrees against H^*(S_n, Z) at d=2",
            limit: secs(30 * 60),
            run: top_degrees_d2,
            graded: true,
        },
        Criterion {
            id: 4,
            name: "configuration space models agree",
            limit: secs(10 * 60),
            run: model_agreement,
            graded: true,
        },
        Criterion {
            id: 5,
            name: "C_2(R^3)^+ against H^*(S_2, sgn)",
            limit: secs(5 * 60),
            run: duality_d3,
            graded: true,
        },
        Criterion {
            id: 6,
            name: "connecting map is n-1",
            limit: secs(30 * 60),
            run: connecting_map,
            graded: true,
        },
        Criterion {
            id: 7,
            name: "spectral sequence limit",
            limit: secs(30 * 60),
            run: spectral_collapse,
            graded: true,
        },
        Criterion {
            id: 8,
            name: "connectivity",
            limit: secs(30 * 60),
            run: connectivity,
            graded: true,
        },
        Criterion {
            id: 9,
            name: "property suites",
            limit: secs(2 * 60),
            run: property_suites,
            graded: true,
        },
        Criterion {
            id: 10,
            name: "H_4(exp_2 S^3) adjudication",
            limit: secs(10 * 60),
            run: adjudication,
            graded: false,
        },
    ];
    let mut failed = false;
    for c in &criteria {
        let start = Instant::now();
        let outcome = (c.run)();
        let elapsed = start.elapsed();
        let status = match (&outcome, c.graded) {
            (Ok(_), _) if elapsed > c.limit => "FAIL",
            (Ok(_), true) => "PASS",
            (Ok(_), false) => "RECORDED",
            (Err(_), _) => "FAIL",
        };
        failed |= status == "FAIL";
        let detail = match &outcome {
            Ok(s) => s.clone(),
            Err(e) => format!("error: {e}"),
        };
        let over = if elapsed > c.limit {
            format!(" over limit {}s", c.limit.as_secs())
        } else {
            String::new()
        };
        println!(
            "criterion {:>2} {status:<8} {} ({:.2}s{over}): {detail}",
            c.id,
            c.name,
            elapsed.as_secs_f64()
        );
    }
    if failed {
        ExitCode::FAILURE
    } else {
        ExitCode::SUCCESS
    }
}
