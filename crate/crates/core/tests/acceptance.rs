//! One line per acceptance criterion; exits nonzero if any criterion fails.

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use num_complex::Complex64;
use num_traits::Zero;
use proptest::prelude::*;
use proptest::test_runner::{Config, TestRunner};
use singinv::charnum::{
    flop_relation_check, invariant_span_rank, ochanine_cp, ochanine_cp_pontryagin,
    span_equivalence, GenusPoly, SWPolynomial,
};
use singinv::elliptic::{
    bl_genus, blown_up_plane, chi_y, divisor_factor as elliptic_divisor_factor, projective_space,
    theta_expand, theta_lattice_sum, CohomologyModel,
};
use singinv::exactalg::{int, long_division_inverse, rat, FracPoly, Rat, RatFunc, TruncSeries};
use singinv::grothendieck::{
    AtomTable, GluePiece, GlueTriple, RealGlueDiagram, RealSpace, Theory, VirtualClass,
};
use singinv::stringy::{stringy, Divisor, ResolutionModel, Strata};
use singinv::weightss::{
    build_e1, compute_e2, toric_builder, vpp_from_ss, Field, FilteredComplex, Matrix,
};

const TIME_LIMIT: Duration = Duration::from_secs(10);

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn check(ok: bool, msg: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn class(s: &str) -> VirtualClass {
    VirtualClass::parse(s).unwrap()
}

fn binomial(n: i64, k: i64) -> usize {
    if k < 0 || k > n {
        return 0;
    }
    (0..k).fold(1usize, |acc, i| acc * (n - i) as usize / (i + 1) as usize)
}

fn real_virtual_betti() -> Outcome {
    let table = AtomTable::new(Theory::Real);
    let mut d = RealGlueDiagram::new();
    let glue = |norm: &str| {
        RealSpace::Glue(GlueTriple {
            normalization: GluePiece::Class(class(norm)),
            exceptional: GluePiece::Class(class("2*pt")),
            center: GluePiece::Class(class("pt")),
        })
    };
    d.insert("wedge", glue("2*S1"));
    d.insert("pinched", glue("S1"));
    let wedge = d
        .virtual_betti(&table, "wedge")
        .map_err(|e| e.to_string())?;
    let pinched = d
        .virtual_betti(&table, "pinched")
        .map_err(|e| e.to_string())?;
    let as_i64 = |v: &[num_bigint::BigInt]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>();
    check(
        as_i64(&wedge) == ["1", "2"],
        format!("wedge gives {:?}", as_i64(&wedge)),
    )?;
    check(
        as_i64(&pinched) == ["0", "1"],
        format!("pinched gives {:?}", as_i64(&pinched)),
    )?;
    // normalization relation [X] = [X̃] − [E] + [Z] evaluated directly
    for (norm, got) in [("2*S1", &wedge), ("S1", &pinched)] {
        let oracle = table.vpp(&class(&format!("{norm} - 2*pt + pt"))).unwrap();
        let coeffs: Vec<String> = (0..got.len())
            .map(|i| oracle.coeff(&int(i as i64)).to_string())
            .collect();
        check(
            coeffs == as_i64(got),
            format!("oracle {coeffs:?} vs {:?}", as_i64(got)),
        )?;
    }
    Ok("(a0,a1) = (1,2) and (0,1)".into())
}

fn model(
    table: &AtomTable,
    ambient: &str,
    divisors: &[(&str, Rat)],
    closed: &[(u32, &str)],
) -> ResolutionModel {
    ResolutionModel {
        atoms: table.clone(),
        ambient: class(ambient),
        divisors: divisors
            .iter()
            .map(|(n, a)| Divisor {
                name: n.to_string(),
                discrepancy: a.clone(),
            })
            .collect(),
        strata: Strata::Closed(closed.iter().map(|(j, c)| (*j, class(c))).collect()),
    }
}

fn crepant_collapse() -> Outcome {
    let complex = AtomTable::new(Theory::Complex);
    let real = AtomTable::new(Theory::Real);
    let zero = int(0);
    let cases = [
        model(
            &complex,
            "P2",
            &[("L", zero.clone()), ("M", zero.clone())],
            &[(1, "P1"), (2, "P1"), (3, "pt")],
        ),
        model(
            &complex,
            "P1",
            &[("p", zero.clone()), ("r", zero.clone())],
            &[(1, "pt"), (2, "pt"), (3, "0")],
        ),
        model(&complex, "P1*P1", &[("F", zero.clone())], &[(1, "P1")]),
        model(&complex, "A2 + Gm", &[("D", zero.clone())], &[(1, "A1")]),
        model(
            &real,
            "S1*S1",
            &[("A", zero.clone()), ("B", zero.clone())],
            &[(1, "S1"), (2, "S1"), (3, "pt")],
        ),
        model(&real, "RP2", &[("L", zero.clone())], &[(1, "RP1")]),
        model(&real, "RP3", &[("H", zero.clone())], &[(1, "RP2")]),
    ];
    for m in &cases {
        let p = stringy(m)
            .map_err(|e| e.to_string())?
            .concrete()
            .ok_or("symbolic result")?;
        let vpp = RatFunc::from(m.atoms.vpp(&m.ambient).unwrap());
        check(
            p == vpp,
            format!("{}: p_str {:?} != vpp {:?}", m.ambient, p, vpp),
        )?;
    }
    Ok(format!(
        "{} crepant models (complex and F2) equal vpp",
        cases.len()
    ))
}

fn resolution_independence() -> Outcome {
    let complex = AtomTable::new(Theory::Complex);
    let blowup = model(&complex, "P2 - pt + P1", &[("E", int(1))], &[(1, "P1")]);
    let p = stringy(&blowup)
        .map_err(|e| e.to_string())?
        .concrete()
        .ok_or("symbolic result")?;
    let expected = RatFunc::from(FracPoly::from_coeffs([1, 1, 1]));
    check(p == expected, format!("P2 via blowup gives {p:?}"))?;

    let mut table = AtomTable::new(Theory::Complex);
    table.define_symbolic("Yo", Some(3)).unwrap();
    let divisorial = model(&table, "Yo + P1*P1", &[("E", int(1))], &[(1, "P1*P1")]);
    let small = table
        .vpp_symbolic(&class("Yo + P1"))
        .unwrap()
        .map(|c| RatFunc::from(c.clone()));
    let got = stringy(&divisorial).map_err(|e| e.to_string())?;
    check(
        got == small,
        "node: divisorial and small resolutions differ",
    )?;
    Ok("P2 = 1+q+q^2; node = [Yo] + (1+q)".into())
}

fn weight_spectral_sequence() -> Outcome {
    for n in 1..=4usize {
        let ss = compute_e2(&build_e1(&toric_builder(n).unwrap()).unwrap()).unwrap();
        let dims = ss.abutment_dims().map_err(|e| e.to_string())?;
        for k in 0..=2 * n as i64 {
            let want = binomial(n as i64, 2 * n as i64 - k);
            let got = dims.get(&k).copied().unwrap_or(0);
            check(
                got == want,
                format!("n={n}: dim H^{k}_c = {got}, expected {want}"),
            )?;
        }
        let d2 = ss.page(2).and_then(|p| p.differential_vanishes());
        check(d2 == Some(true), format!("n={n}: d2 vanishing is {d2:?}"))?;
        let vpp = vpp_from_ss(&ss).unwrap();
        let table = AtomTable::new(Theory::Complex);
        let direct = table.vpp(&class("Gm").pow(n as u32)).unwrap();
        let binomial_form = FracPoly::from_coeffs([-1, 1]).pow(n as u32);
        check(
            vpp == direct && vpp == binomial_form,
            format!("n={n}: vpp {vpp:?}"),
        )?;
    }
    Ok("dims C(n,2n-k), d2 = 0, vpp = (q-1)^n for n <= 4".into())
}

fn mod_p_phenomenon() -> Outcome {
    let mut d = Matrix::zeros(2, 1);
    d.set(0, 0, int(2));
    d.set(1, 0, int(1));
    let levels = vec![vec![0], vec![1, 2]];
    let mut summary = Vec::new();
    for (field, expect_change) in [(Field::Prime(2), true), (Field::Rational, false)] {
        let c = FilteredComplex::new(field, 0, levels.clone(), vec![d.clone()])
            .map_err(|e| e.to_string())?;
        let ss = c.pages().map_err(|e| e.to_string())?;
        let e2 = ss.page(2).ok_or("no E2")?;
        let e3 = ss.page(3).ok_or("no E3")?;
        check(
            (e2.dims != e3.dims) == expect_change,
            format!("{field:?}: E2 {:?} vs E3 {:?}", e2.dims, e3.dims),
        )?;
        if !expect_change {
            check(
                e2.differential_vanishes() == Some(true),
                "d2 nonzero over Q",
            )?;
        }
        let totals = ss.abutment_dims().map_err(|e| e.to_string())?;
        let direct: BTreeMap<i64, usize> = c
            .cohomology_dims()
            .into_iter()
            .filter(|(_, v)| *v > 0)
            .collect();
        let totals: BTreeMap<i64, usize> = totals.into_iter().filter(|(_, v)| *v > 0).collect();
        check(
            totals == direct,
            format!("{field:?}: E_inf {totals:?} vs H {direct:?}"),
        )?;
        summary.push(format!(
            "{field:?} E2{}E3",
            if expect_change { "!=" } else { "=" }
        ));
    }
    Ok(summary.join(", ") + ", totals match")
}

fn elliptic_genus() -> Outcome {
    let direct = CohomologyModel::new(&projective_space(2)).unwrap();
    let blown = CohomologyModel::new(&blown_up_plane(int(1))).unwrap();
    let a = bl_genus(&direct, 3).map_err(|e| e.to_string())?;
    let b = bl_genus(&blown, 3).map_err(|e| e.to_string())?;
    for k in 0..=3 {
        check(
            a.coeff(k) == b.coeff(k),
            format!("q^{k} coefficients differ"),
        )?;
    }
    let theta = theta_expand(3);
    let f = elliptic_divisor_factor(&theta, &int(0), 3).map_err(|e| e.to_string())?;
    let one = f.one_like();
    for j in 0..=3u32 {
        check(
            f.coeff(&[j]).agrees_through(&one.coeff(&[j]), 3),
            "crepant factor is not 1",
        )?;
    }
    let one_minus = RatFunc::from(FracPoly::from_coeffs([1, -1]));
    for n in 1..=2u32 {
        let m = CohomologyModel::new(&projective_space(n)).unwrap();
        let chi = chi_y(&m).map_err(|e| e.to_string())?;
        let hodge = FracPoly::from_coeffs(vec![1; n as usize + 1]);
        check(chi == hodge, format!("chi_y(P{n}) = {chi:?}"))?;
        let g0 = bl_genus(&m, 0).unwrap().coeff(0);
        check(
            g0.mul(&one_minus.pow(n)) == RatFunc::from(hodge),
            format!("P{n}: q^0 term"),
        )?;
    }
    Ok("P2 = Bl P2 through q^3; crepant factor 1; q^0 = chi_y for P1, P2".into())
}

fn theta_sanity() -> Outcome {
    let theta = theta_expand(30);
    let samples = [
        (Complex64::new(0.3, 0.0), Complex64::new(0.0, 0.7)),
        (Complex64::new(0.1, 0.05), Complex64::new(0.25, 1.1)),
        (Complex64::new(-0.37, 0.12), Complex64::new(-0.4, 0.9)),
    ];
    let mut worst = 0.0f64;
    for (z, tau) in samples {
        let p = theta.eval(z, tau);
        let l = theta_lattice_sum(z, tau, 40);
        let err = (p - l).norm() / l.norm();
        check(
            err < 1e-10,
            format!("z={z}, tau={tau}: relative error {err:e}"),
        )?;
        worst = worst.max(err);
    }
    Ok(format!("3 samples, worst relative error {worst:.1e}"))
}

fn flop_ranks() -> Outcome {
    let mut failures = Vec::new();
    let rank = |n| invariant_span_rank(n).map_err(|e| e.to_string());
    for n in [3, 5, 7] {
        let r = rank(n)?;
        if r != 0 {
            failures.push(format!("rank({n}) = {r}, expected 0"));
        }
    }
    for n in [4u32, 6, 8] {
        let r = rank(n)?;
        let want = n as usize / 2 + 1;
        if r != want {
            failures.push(format!("rank({n}) = {r}, expected {want}"));
        }
    }
    for n in [2, 4, 6, 8] {
        if !span_equivalence(n).map_err(|e| e.to_string())? {
            failures.push(format!("span_equivalence({n}) false"));
        }
    }
    let probe = SWPolynomial::parse("w2 w6").unwrap();
    if !flop_relation_check(2, &[probe])
        .map_err(|e| e.to_string())?
        .holds()
    {
        failures.push("flop_relation_check(2) false".into());
    }
    let r2 = rank(2)?;
    if failures.is_empty() {
        Ok(format!("ranks as stated; rank(2) = {r2}"))
    } else {
        Err(failures.join("; ") + &format!(" (rank(2) = {r2})"))
    }
}

fn ochanine_genus() -> Outcome {
    let delta = GenusPoly::delta();
    let cp4 = GenusPoly::gamma().scale(&int(2)).add(&delta.pow(2));
    let gamma_by_definition = delta.pow(2).sub(&GenusPoly::epsilon()).scale(&rat(1, 4));
    check(GenusPoly::gamma() == gamma_by_definition, "gamma mismatch")?;
    check(
        ochanine_cp(2) == delta,
        format!("phi(CP2) = {}", ochanine_cp(2)),
    )?;
    check(
        ochanine_cp(4) == cp4,
        format!("phi(CP4) = {}", ochanine_cp(4)),
    )?;
    for n in [2, 4, 6] {
        let p = ochanine_cp_pontryagin(n).map_err(|e| e.to_string())?;
        check(p == ochanine_cp(n), format!("CP{n}: routes differ"))?;
    }
    Ok("phi(CP2) = delta, phi(CP4) = 2*gamma + delta^2, routes agree".into())
}

fn jobs() -> Vec<PathBuf> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../jobs");
    let mut paths: Vec<_> = std::fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|e| e == "json"))
        .collect();
    paths.sort();
    paths
}

fn small_rat() -> impl Strategy<Value = Rat> {
    (-6i64..=6, 1i64..=4).prop_map(|(n, d)| rat(n, d))
}

fn fracpoly() -> impl Strategy<Value = FracPoly> {
    prop::collection::vec(
        (
            small_rat(),
            (-3i64..=6, 1i64..=3).prop_map(|(n, d)| rat(n, d)),
        ),
        0..5,
    )
    .prop_map(FracPoly::from_terms)
}

fn polynomial() -> impl Strategy<Value = FracPoly> {
    prop::collection::vec(-4i64..=4, 1..5).prop_map(FracPoly::from_coeffs)
}

fn run_property<S: Strategy>(
    s: S,
    f: impl Fn(S::Value) -> Result<(), TestCaseError>,
) -> Result<(), String> {
    let mut runner = TestRunner::new(Config {
        cases: 1000,
        failure_persistence: None,
        ..Config::default()
    });
    runner.run(&s, f).map_err(|e| e.to_string())
}

#[allow(clippy::eq_op)]
fn determinism_and_kernel() -> Outcome {
    let paths = jobs();
    for p in &paths {
        let p = p.to_str().unwrap();
        for format in ["text", "json"] {
            let a = Command::new(env!("CARGO_BIN_EXE_singinv"))
                .args([p, "--format", format])
                .output()
                .unwrap();
            let b = Command::new(env!("CARGO_BIN_EXE_singinv"))
                .args([p, "--format", format])
                .output()
                .unwrap();
            check(
                a.status.success(),
                format!("{p}: {}", String::from_utf8_lossy(&a.stderr)),
            )?;
            check(
                a.stdout == b.stdout,
                format!("{p} ({format}) differs between runs"),
            )?;
        }
    }
    run_property((fracpoly(), fracpoly(), fracpoly()), |(a, b, c)| {
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert!((&a - &a).is_zero());
        Ok(())
    })?;
    let nonzero = || polynomial().prop_filter("nonzero", |p| !p.is_zero());
    run_property((polynomial(), nonzero(), nonzero()), |(n, d, k)| {
        let f = RatFunc::normalize(&n, &d).unwrap();
        prop_assert_eq!(
            RatFunc::normalize(&(&n * &k), &(&d * &k)).unwrap(),
            f.clone()
        );
        prop_assert_eq!(f.mul(&RatFunc::from(d.clone())), RatFunc::from(n.clone()));
        Ok(())
    })?;
    let unit = small_rat().prop_filter("unit", |c| !c.is_zero());
    run_property(
        (unit, prop::collection::vec(small_rat(), 0..8), 0u32..10),
        |(c0, rest, cap)| {
            let mut coeffs = vec![c0];
            coeffs.extend(rest);
            let s = TruncSeries::univariate("q", cap, coeffs.iter().cloned());
            let inv = s.invert().unwrap();
            prop_assert_eq!(
                inv.univariate_coeffs(),
                long_division_inverse(&coeffs, cap as usize).unwrap()
            );
            prop_assert_eq!(s.mul(&inv), s.one_like());
            Ok(())
        },
    )?;
    Ok(format!(
        "{} documents rerun identically; 3 x 1000 property cases",
        paths.len()
    ))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("real virtual Betti numbers", real_virtual_betti),
        ("crepant collapse", crepant_collapse),
        ("resolution independence", resolution_independence),
        ("weight spectral sequence", weight_spectral_sequence),
        ("mod-p phenomenon", mod_p_phenomenon),
        ("elliptic genus", elliptic_genus),
        ("theta sanity", theta_sanity),
        ("flop ranks", flop_ranks),
        ("Ochanine genus", ochanine_genus),
        ("determinism and kernel properties", determinism_and_kernel),
    ];
    let mut failed = 0;
    for (k, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(f).unwrap_or_else(|_| Err("panicked".into()));
        let elapsed = start.elapsed();
        let outcome = match outcome {
            Ok(_) if elapsed > TIME_LIMIT => Err(format!("took {elapsed:.1?}")),
            o => o,
        };
        match outcome {
            Ok(msg) => println!("PASS {:>2} {name}: {msg} [{elapsed:.2?}]", k + 1),
            Err(msg) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {msg} [{elapsed:.2?}]", k + 1);
            }
        }
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
