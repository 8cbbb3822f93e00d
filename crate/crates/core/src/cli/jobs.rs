use std::collections::BTreeMap;

use num_complex::Complex64;
use serde_json::{json, Map, Value};

use super::doc::*;
use crate::charnum::{
    flop_relation_check, in_image_ring, invariant_span_rank, ochanine_cp, ochanine_cp_pontryagin,
    span_equivalence, steenrod_sq, wu_class, wu_span_rank, ManifoldAtom, SWPolynomial,
};
use crate::elliptic::{
    bl_genus, blown_up_plane, chi_y, divisor_factor as elliptic_divisor_factor, projective_space,
    theta_expand, theta_lattice_sum, ClassSpec, CohomologyModel, DivisorSpec, JacobiSeries,
    ModelSpec,
};
use crate::error::{Error, Result};
use crate::exactalg::{int, FracPoly, Rat, RatFunc};
use crate::grothendieck::{
    AtomTable, GluePiece, GlueTriple, RealGlueDiagram, RealSpace, SymbolicSum, Theory, UserAtom,
    VirtualClass,
};
use crate::stringy::{self, Divisor, ResolutionModel, Strata, Subset};
use crate::weightss::{
    build_e1, compute_e2, toric_builder, vpp_from_ss, BettiPiece, Field, FilteredComplex, Matrix,
    SncData, SpectralSequence,
};

fn at(path: &str, e: Error) -> Error {
    match e {
        Error::Input(s) => Error::Input(format!("{path}: {s}")),
        other => other,
    }
}

fn theory_of(t: TheoryDoc) -> Theory {
    match t {
        TheoryDoc::Complex => Theory::Complex,
        TheoryDoc::Real => Theory::Real,
    }
}

fn atom_table(theory: Theory, atoms: &[AtomDoc], symbolic: &[SymbolicDoc]) -> Result<AtomTable> {
    let mut table = AtomTable::new(theory);
    for (k, a) in atoms.iter().enumerate() {
        table
            .define_user(UserAtom {
                name: a.name.clone(),
                dimension: a.dimension,
                betti: a.betti.clone(),
                smooth_compact: a.smooth_compact,
                poincare_duality: a.poincare_duality,
            })
            .map_err(|e| at(&format!("payload.atoms[{k}]"), e))?;
    }
    for (k, s) in symbolic.iter().enumerate() {
        table
            .define_symbolic(&s.name, s.dimension)
            .map_err(|e| at(&format!("payload.symbolic[{k}]"), e))?;
    }
    Ok(table)
}

fn class(table: &AtomTable, src: &str, path: &str) -> Result<VirtualClass> {
    let c = VirtualClass::parse(src).map_err(|e| at(path, e))?;
    table.check(&c).map_err(|e| at(path, e))?;
    Ok(c)
}

fn render_sum(s: &SymbolicSum<FracPoly>, var: &str) -> String {
    match s.concrete() {
        Some(p) => p.display_in(var).to_string(),
        None => s.render(|c| c.display_in(var).to_string()),
    }
}

fn render_ratsum(s: &SymbolicSum<RatFunc>, var: &str) -> String {
    match s.concrete() {
        Some(p) => p.display_in(var).to_string(),
        None => s.render(|c| c.display_in(var).to_string()),
    }
}

pub fn vpp(payload: &Value) -> Result<Value> {
    let p: VppPayload = parse_payload(payload)?;
    let theory = theory_of(p.theory);
    let table = atom_table(theory, &p.atoms, &p.symbolic)?;
    let mut out = Map::new();
    for (name, src) in &p.classes {
        let path = format!("payload.classes.{name}");
        let c = class(&table, src, &path)?;
        let v = table.vpp_symbolic(&c)?;
        let mut entry = Map::new();
        entry.insert("class".into(), json!(c.to_string()));
        entry.insert("vpp".into(), json!(render_sum(&v, theory.var())));
        if let Some(poly) = v.concrete() {
            entry.insert(
                "value_at_one".into(),
                json!(poly.coefficient_sum().to_string()),
            );
        }
        if let Ok(Some(d)) = table.dimension(&c) {
            entry.insert("dimension".into(), json!(d));
        }
        out.insert(name.clone(), Value::Object(entry));
    }
    Ok(json!({ "theory": theory.var(), "classes": out }))
}

fn piece(table: &AtomTable, p: &PieceDoc, path: &str) -> Result<GluePiece> {
    Ok(match p {
        PieceDoc::Class(s) => GluePiece::Class(class(table, s, path)?),
        PieceDoc::Space(s) => GluePiece::Space(s.clone()),
    })
}

pub fn real_vb(payload: &Value) -> Result<Value> {
    let p: RealVbPayload = parse_payload(payload)?;
    let table = atom_table(Theory::Real, &p.atoms, &[])?;
    let mut diagram = RealGlueDiagram::new();
    for (name, s) in &p.spaces {
        let path = format!("payload.spaces.{name}");
        let space = match s {
            SpaceDoc::Class(src) => RealSpace::Class(class(&table, src, &path)?),
            SpaceDoc::Glue(g) => RealSpace::Glue(GlueTriple {
                normalization: piece(&table, &g.normalization, &format!("{path}.normalization"))?,
                exceptional: piece(&table, &g.exceptional, &format!("{path}.exceptional"))?,
                center: piece(&table, &g.center, &format!("{path}.center"))?,
            }),
        };
        diagram.insert(name, space);
    }
    let mut out = Map::new();
    for t in &p.targets {
        let poly = diagram.real_vb(&table, t)?;
        let betti = diagram.virtual_betti(&table, t)?;
        out.insert(
            t.clone(),
            json!({
                "polynomial": poly.display_in("t").to_string(),
                "virtual_betti": betti.iter().map(|b| b.to_string()).collect::<Vec<_>>(),
            }),
        );
    }
    Ok(json!({ "spaces": out }))
}

fn resolution(table: &AtomTable, d: &ResolutionDoc, path: &str) -> Result<ResolutionModel> {
    let ambient = class(table, &d.ambient, &format!("{path}.ambient"))?;
    let mut divisors = Vec::new();
    for (k, dv) in d.divisors.iter().enumerate() {
        divisors.push(Divisor {
            name: dv.name.clone(),
            discrepancy: dv
                .discrepancy
                .value()
                .map_err(|e| at(&format!("{path}.divisors[{k}].discrepancy"), e))?,
        });
    }
    if divisors.len() > stringy::MAX_DIVISORS {
        return Err(Error::input(format!(
            "{path}.divisors: at most {} divisors are supported",
            stringy::MAX_DIVISORS
        )));
    }
    let mut strata = BTreeMap::new();
    for (key, src) in &d.strata.classes {
        let kpath = format!("{path}.strata.classes.{key}");
        let mut j: Subset = 0;
        for name in key.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let i = divisors
                .iter()
                .position(|dv| dv.name == name)
                .ok_or_else(|| Error::UnknownReference(format!("{kpath}: divisor `{name}`")))?;
            j |= 1 << i;
        }
        if strata.insert(j, class(table, src, &kpath)?).is_some() {
            return Err(Error::input(format!("{kpath}: stratum listed twice")));
        }
    }
    Ok(ResolutionModel {
        atoms: table.clone(),
        ambient,
        divisors,
        strata: match d.strata.kind {
            StrataKind::Closed => Strata::Closed(strata),
            StrataKind::Open => Strata::Open(strata),
        },
    })
}

pub fn stringy_job(payload: &Value) -> Result<Value> {
    let p: StringyPayload = parse_payload(payload)?;
    let theory = theory_of(p.theory);
    let var = theory.var();
    let table = atom_table(theory, &p.atoms, &p.symbolic)?;
    let mut models = BTreeMap::new();
    let mut out = Map::new();
    for (name, d) in &p.models {
        let path = format!("payload.models.{name}");
        let m = resolution(&table, d, &path)?;
        let s = stringy::stringy(&m)?;
        let mut entry = Map::new();
        entry.insert("p_str".into(), json!(render_ratsum(&s, var)));
        if let Some(v) = stringy::value_at_one(&s) {
            let rendered = match v.concrete() {
                Some(x) => x.to_string(),
                None => v.render(|c| c.to_string()),
            };
            entry.insert("value_at_one".into(), json!(rendered));
        }
        let crepant = m
            .divisors
            .iter()
            .all(|dv| dv.discrepancy == Rat::from_integer(0.into()));
        entry.insert("crepant".into(), json!(crepant));
        if let Some(src) = &d.expect {
            let c = class(&table, src, &format!("{path}.expect"))?;
            let v = table.vpp_symbolic(&c)?.map(|x| RatFunc::from(x.clone()));
            entry.insert(
                "expect".into(),
                json!({ "vpp": render_ratsum(&v, var), "equal": v == s }),
            );
        }
        out.insert(name.clone(), Value::Object(entry));
        models.insert(name.clone(), m);
    }
    let mut comparisons = Vec::new();
    for (k, [a, b]) in p.compare.iter().enumerate() {
        let get = |n: &String| {
            models.get(n).ok_or_else(|| {
                Error::UnknownReference(format!("payload.compare[{k}]: model `{n}`"))
            })
        };
        let equal = stringy::check_independence(get(a)?, get(b)?)?;
        comparisons.push(json!({ "left": a, "right": b, "equal": equal }));
    }
    Ok(json!({ "theory": var, "models": out, "comparisons": comparisons }))
}

fn matrix(rows: usize, cols: usize, m: &[Vec<RatDoc>], path: &str) -> Result<Matrix> {
    if m.len() != rows || m.iter().any(|r| r.len() != cols) {
        return Err(Error::input(format!(
            "{path}: expected a {rows}x{cols} matrix"
        )));
    }
    let entries = m
        .iter()
        .flatten()
        .map(RatDoc::value)
        .collect::<Result<Vec<_>>>()
        .map_err(|e| at(path, e))?;
    Matrix::from_rows(rows, cols, entries).map_err(|e| at(path, e))
}

fn page_dump(ss: &SpectralSequence) -> Vec<Value> {
    ss.pages
        .iter()
        .map(|page| {
            let dims: Vec<String> = page
                .dims
                .iter()
                .map(|((i, j), d)| format!("E{}[{i},{j}] = {d}", page.r))
                .collect();
            let mut entry = Map::new();
            entry.insert("r".into(), json!(page.r));
            entry.insert("dims".into(), json!(dims));
            if let Some(ds) = &page.differentials {
                let ranks: Vec<String> = ds
                    .iter()
                    .map(|(b, m)| (b, m.rank(ss.field)))
                    .filter(|(_, r)| *r > 0)
                    .map(|((i, j), r)| {
                        let (ti, tj) = page.target((*i, *j));
                        format!("d{}: [{i},{j}] -> [{ti},{tj}] rank {r}", page.r)
                    })
                    .collect();
                entry.insert("differential_ranks".into(), json!(ranks));
            }
            Value::Object(entry)
        })
        .collect()
}

fn totals(m: &BTreeMap<i64, usize>) -> Value {
    let lo = m.keys().next().copied().unwrap_or(0).min(0);
    let hi = m.keys().last().copied().unwrap_or(0);
    json!((lo..=hi)
        .map(|k| m.get(&k).copied().unwrap_or(0))
        .collect::<Vec<_>>())
}

fn snc_report(data: &SncData) -> Result<Value> {
    let e1 = build_e1(data)?;
    let ss = compute_e2(&e1)?;
    let mut out = Map::new();
    out.insert("pages".into(), json!(page_dump(&ss)));
    out.insert("complete".into(), json!(ss.complete));
    if ss.complete {
        out.insert("compact_support_dims".into(), totals(&ss.abutment_dims()?));
    }
    if let Some(e2) = ss.page(2) {
        if let Some(v) = e2.differential_vanishes() {
            out.insert("d2_vanishes".into(), json!(v));
        }
    }
    if ss.field == Field::Rational {
        out.insert(
            "vpp".into(),
            json!(vpp_from_ss(&ss)?.display_in("q").to_string()),
        );
    }
    Ok(Value::Object(out))
}

pub fn weight_ss(payload: &Value, field: Field) -> Result<Value> {
    let p: WeightPayload = parse_payload(payload)?;
    let mut out = match p {
        WeightPayload::Toric { n } => {
            let mut data = toric_builder(n).map_err(|e| at("payload.n", e))?;
            data.field = field;
            snc_report(&data)?
        }
        WeightPayload::Snc {
            components,
            strata,
            d1,
        } => {
            let strata: Vec<Vec<BettiPiece>> = strata
                .into_iter()
                .map(|level| {
                    level
                        .into_iter()
                        .map(|b| BettiPiece {
                            name: b.name,
                            betti: b.betti,
                        })
                        .collect()
                })
                .collect();
            let mut data = SncData {
                field,
                components,
                strata,
                d1: BTreeMap::new(),
            };
            for (k, d) in d1.iter().enumerate() {
                let path = format!("payload.d1[{k}]");
                let m = matrix(data.dim(d.i + 1, d.j), data.dim(d.i, d.j), &d.matrix, &path)?;
                data.d1.insert((d.i, d.j), m);
            }
            snc_report(&data)?
        }
        WeightPayload::Filtered {
            lowest_degree,
            levels,
            differentials,
        } => {
            if differentials.len() + 1 != levels.len() {
                return Err(Error::input(format!(
                    "payload.differentials: {} degrees need {} differentials",
                    levels.len(),
                    levels.len().saturating_sub(1)
                )));
            }
            let mats = differentials
                .iter()
                .enumerate()
                .map(|(k, m)| {
                    matrix(
                        levels[k + 1].len(),
                        levels[k].len(),
                        m,
                        &format!("payload.differentials[{k}]"),
                    )
                })
                .collect::<Result<Vec<_>>>()?;
            let fc = FilteredComplex::new(field, lowest_degree, levels, mats)?;
            let ss = fc.pages()?;
            let direct = fc.cohomology_dims();
            let inf = ss.abutment_dims()?;
            let render = |m: &BTreeMap<i64, usize>| -> Vec<String> {
                m.iter()
                    .filter(|(_, d)| **d > 0)
                    .map(|(n, d)| format!("H^{n} = {d}"))
                    .collect()
            };
            let pages_equal = |a: u32, b: u32| match (ss.page(a), ss.page(b)) {
                (Some(x), Some(y)) => Some(x.dims == y.dims),
                _ => None,
            };
            let mut o = Map::new();
            o.insert("pages".into(), json!(page_dump(&ss)));
            o.insert("e_inf_totals".into(), json!(render(&inf)));
            o.insert("direct_cohomology".into(), json!(render(&direct)));
            o.insert(
                "totals_match".into(),
                json!(direct
                    .iter()
                    .all(|(n, d)| inf.get(n).copied().unwrap_or(0) == *d)),
            );
            if let Some(eq) = pages_equal(2, 3) {
                o.insert("e2_equals_e3".into(), json!(eq));
            }
            if let Some(v) = ss.page(2).and_then(|pg| pg.differential_vanishes()) {
                o.insert("d2_vanishes".into(), json!(v));
            }
            Value::Object(o)
        }
    };
    if let Value::Object(m) = &mut out {
        m.insert("field".into(), json!(field.to_string()));
    }
    Ok(out)
}

fn class_spec(m: &BTreeMap<String, RatDoc>, path: &str) -> Result<ClassSpec> {
    m.iter()
        .map(|(k, v)| Ok((k.clone(), v.value().map_err(|e| at(path, e))?)))
        .collect()
}

fn model_spec(d: &EllModelDoc, path: &str) -> Result<ModelSpec> {
    Ok(match d {
        EllModelDoc::ProjectiveSpace(n) => projective_space(*n),
        EllModelDoc::BlownUpPlane(a) => blown_up_plane(a.value().map_err(|e| at(path, e))?),
        EllModelDoc::Ring(r) => ModelSpec {
            dimension: r.dimension,
            basis: r.basis.clone(),
            products: r
                .products
                .iter()
                .enumerate()
                .map(|(k, (a, b, c))| {
                    Ok((
                        a.clone(),
                        b.clone(),
                        class_spec(c, &format!("{path}.products[{k}]"))?,
                    ))
                })
                .collect::<Result<_>>()?,
            integrals: class_spec(&r.integrals, &format!("{path}.integrals"))?,
            chern: r
                .chern
                .iter()
                .enumerate()
                .map(|(k, c)| class_spec(c, &format!("{path}.chern[{k}]")))
                .collect::<Result<_>>()?,
            divisors: r
                .divisors
                .iter()
                .enumerate()
                .map(|(k, dv)| {
                    let p = format!("{path}.divisors[{k}]");
                    Ok(DivisorSpec {
                        name: dv.name.clone(),
                        class: class_spec(&dv.class, &p)?,
                        discrepancy: dv.discrepancy.value().map_err(|e| at(&p, e))?,
                    })
                })
                .collect::<Result<_>>()?,
        },
    })
}

/// Default `q`-order of the product expansion for numeric theta samples.
pub const THETA_SAMPLE_ORDER: u32 = 30;
const THETA_LATTICE_TERMS: i64 = 40;

fn complex_string(z: Complex64) -> String {
    format!("{:.12e} {:+.12e}i", z.re, z.im)
}

fn series_table(s: &JacobiSeries) -> Vec<String> {
    s.render()
}

pub fn elliptic(payload: &Value, order: u32) -> Result<Value> {
    let p: EllipticPayload = parse_payload(payload)?;
    let mut models = BTreeMap::new();
    let mut genera = BTreeMap::new();
    let mut out = Map::new();
    for (name, d) in &p.models {
        let path = format!("payload.models.{name}");
        let m = CohomologyModel::new(&model_spec(d, &path)?).map_err(|e| at(&path, e))?;
        let g = bl_genus(&m, order)?;
        out.insert(
            name.clone(),
            json!({ "dimension": m.dimension(), "genus": series_table(&g) }),
        );
        genera.insert(name.clone(), g);
        models.insert(name.clone(), m);
    }
    let mut comparisons = Vec::new();
    for (k, [a, b]) in p.compare.iter().enumerate() {
        let get = |n: &String| {
            genera.get(n).ok_or_else(|| {
                Error::UnknownReference(format!("payload.compare[{k}]: model `{n}`"))
            })
        };
        let (x, y) = (get(a)?, get(b)?);
        let table: Vec<Value> = (0..=order as usize)
            .map(|n| {
                json!({
                    "order": n,
                    "left": x.coeff(n).display_in("z").to_string(),
                    "right": y.coeff(n).display_in("z").to_string(),
                    "equal": x.coeff(n) == y.coeff(n),
                })
            })
            .collect();
        comparisons.push(json!({
            "left": a,
            "right": b,
            "equal": x.agrees_through(y, order),
            "table": table,
        }));
    }
    let mut chis = Map::new();
    for (k, name) in p.chi_y.iter().enumerate() {
        let m = models.get(name).ok_or_else(|| {
            Error::UnknownReference(format!("payload.chi_y[{k}]: model `{name}`"))
        })?;
        let chi = chi_y(m)?;
        let lowest = genera[name].coeff(0);
        let one_minus = RatFunc::from(FracPoly::from_coeffs([1, -1]));
        let matches = lowest.mul(&one_minus.pow(m.dimension())) == RatFunc::from(chi.clone());
        chis.insert(
            name.clone(),
            json!({ "chi_y": chi.display_in("z").to_string(), "lowest_term_matches": matches }),
        );
    }
    let mut result = Map::new();
    result.insert("order".into(), json!(order));
    result.insert("models".into(), Value::Object(out));
    result.insert("comparisons".into(), json!(comparisons));
    result.insert("chi_y".into(), Value::Object(chis));
    if p.crepant_factor {
        let theta = theta_expand(order);
        let f = elliptic_divisor_factor(&theta, &int(0), order)?;
        let one = f.one_like();
        let trivial = (0..=order).all(|j| f.coeff(&[j]).agrees_through(&one.coeff(&[j]), order));
        result.insert("crepant_factor_is_one".into(), json!(trivial));
    }
    if !p.theta_samples.is_empty() {
        let theta = theta_expand(p.theta_order.unwrap_or(THETA_SAMPLE_ORDER));
        let mut rows = Vec::new();
        for (k, s) in p.theta_samples.iter().enumerate() {
            let z = Complex64::new(s.z[0], s.z[1]);
            let tau = Complex64::new(s.tau[0], s.tau[1]);
            if tau.im <= 0.0 {
                return Err(Error::input(format!(
                    "payload.theta_samples[{k}].tau: imaginary part must be positive"
                )));
            }
            let product = theta.eval(z, tau);
            let lattice = theta_lattice_sum(z, tau, THETA_LATTICE_TERMS);
            let rel = (product - lattice).norm() / lattice.norm().max(f64::MIN_POSITIVE);
            rows.push(json!({
                "z": complex_string(z),
                "tau": complex_string(tau),
                "product": complex_string(product),
                "lattice": complex_string(lattice),
                "relative_error": format!("{rel:.3e}"),
                "agree_to_10_digits": rel < 1e-10,
            }));
        }
        result.insert("theta_samples".into(), json!(rows));
    }
    Ok(Value::Object(result))
}

fn bit(b: bool) -> u8 {
    u8::from(b)
}

pub fn charnum(payload: &Value) -> Result<Value> {
    let p: CharnumPayload = parse_payload(payload)?;
    let mut out = Map::new();
    if !p.sw_numbers.is_empty() {
        let mut rows = Vec::new();
        for (k, s) in p.sw_numbers.iter().enumerate() {
            let path = format!("payload.sw_numbers[{k}]");
            let m = ManifoldAtom::parse(&s.manifold).map_err(|e| at(&path, e))?;
            let poly = SWPolynomial::parse(&s.monomial).map_err(|e| at(&path, e))?;
            rows.push(json!({
                "manifold": m.name(),
                "w": m.render(m.total_sw()),
                "number": poly.to_string(),
                "value": bit(m.evaluate(&poly)?),
            }));
        }
        out.insert("sw_numbers".into(), json!(rows));
    }
    if !p.steenrod.is_empty() {
        let mut rows = Vec::new();
        for (k, s) in p.steenrod.iter().enumerate() {
            let poly = SWPolynomial::parse(&s.polynomial)
                .map_err(|e| at(&format!("payload.steenrod[{k}]"), e))?;
            rows.push(format!("Sq{}({poly}) = {}", s.i, steenrod_sq(s.i, &poly)));
        }
        out.insert("steenrod".into(), json!(rows));
    }
    if !p.wu_classes.is_empty() {
        let rows: Vec<String> = p
            .wu_classes
            .iter()
            .map(|&i| format!("v{i} = {}", wu_class(i)))
            .collect();
        out.insert("wu_classes".into(), json!(rows));
    }
    if !p.span_ranks.is_empty() {
        let mut rows = Vec::new();
        for &n in &p.span_ranks {
            rows.push(json!({
                "n": n,
                "rank": invariant_span_rank(n)?,
                "wu_rank": wu_span_rank(n)?,
                "bordism_dimension": crate::charnum::bordism_partitions(n).len(),
            }));
        }
        out.insert("span_ranks".into(), json!(rows));
    }
    if !p.span_equivalence.is_empty() {
        let mut rows = Vec::new();
        for &n in &p.span_equivalence {
            rows.push(json!({ "n": n, "equivalent": span_equivalence(n)? }));
        }
        out.insert("span_equivalence".into(), json!(rows));
    }
    if !p.flop.is_empty() {
        let mut rows = Vec::new();
        for (k, f) in p.flop.iter().enumerate() {
            let probes = f
                .probes
                .iter()
                .map(|s| SWPolynomial::parse(s))
                .collect::<Result<Vec<_>>>()
                .map_err(|e| at(&format!("payload.flop[{k}].probes"), e))?;
            let r = flop_relation_check(f.a, &probes)?;
            let line = |row: &crate::charnum::FlopRow| {
                format!("{}: {} vs {}", row.number, bit(row.left), bit(row.right))
            };
            rows.push(json!({
                "a": r.a,
                "dimension": r.dimension,
                "left": r.left,
                "right": r.right,
                "vacuous": r.vacuous,
                "holds": r.holds(),
                "numbers": r.rows.iter().map(line).collect::<Vec<_>>(),
                "probes": r.probes.iter().map(line).collect::<Vec<_>>(),
            }));
        }
        out.insert("flop".into(), json!(rows));
    }
    if !p.ochanine.is_empty() {
        let mut rows = Vec::new();
        for &n in &p.ochanine {
            let log = ochanine_cp(n);
            let pont = ochanine_cp_pontryagin(n)?;
            rows.push(json!({
                "manifold": format!("CP{n}"),
                "delta_epsilon": log.to_string(),
                "delta_gamma": log.render_gamma(),
                "routes_agree": log == pont,
                "in_image_ring": in_image_ring(&log),
            }));
        }
        out.insert("ochanine".into(), json!(rows));
    }
    Ok(Value::Object(out))
}
