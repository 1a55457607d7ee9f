//! Subcommand implementations.

use std::path::Path;
use std::str::FromStr;

use num_rational::BigRational;
use reductlab::eklab::{self, ExactField, ValueOrder};
use reductlab::redprod::{detected_filter, factor_homomorphism, factor_map, reduced_product, verify_surjectivity};
use reductlab::relcheck::{
    self, catalog_for, check_dr, perp_report, transitivity_search, BinaryRelation, Flavor, FormalRelation,
};
use reductlab::setfam::{
    check_bdd, close_to_filter, decompose_filter, is_filter, least_bdd_n, Filter, IndexSet, SubsetFamily, Ultrafilter,
};
use reductlab::suites::{self, Caps, Fault};
use reductlab::ualg::{is_identity, parse_equation, Congruence, FiniteAlgebra};
use reductlab::Check;
use serde::Serialize;
use serde_json::{json, Value};

use crate::docs::{self, MapOnProduct};
use crate::report::{Findings, InputError};
use crate::*;

type Outcome = Result<Findings, InputError>;
pub type Job<'a> = Box<dyn FnOnce() -> Outcome + 'a>;

fn inputs<T: Serialize>(args: &T) -> Value {
    serde_json::to_value(args).expect("arguments serialize")
}

fn job<'a, T: Serialize>(name: &str, args: &'a T, run: fn(&'a T) -> Outcome) -> (String, Value, Job<'a>) {
    (name.to_string(), inputs(args), Box::new(move || run(args)))
}

pub fn dispatch(command: &Command) -> (String, Value, Job<'_>) {
    match command {
        Command::Filter(FilterCmd::Check(a)) => job("filter check", a, filter_check),
        Command::Filter(FilterCmd::Decompose(a)) => job("filter decompose", a, filter_decompose),
        Command::Filter(FilterCmd::Bdd(a)) => job("filter bdd", a, filter_bdd),
        Command::Algebra(AlgebraCmd::Check(a)) => job("algebra check", a, algebra_check),
        Command::Algebra(AlgebraCmd::Identity(a)) => job("algebra identity", a, algebra_identity),
        Command::Redprod(RedprodCmd::Build(a)) => job("redprod build", a, redprod_build),
        Command::Redprod(RedprodCmd::Detect(a)) => job("redprod detect", a, redprod_detect),
        Command::Redprod(RedprodCmd::Factor(a)) => job("redprod factor", a, redprod_factor),
        Command::Redprod(RedprodCmd::Surj(a)) => job("redprod surj", a, redprod_surj),
        Command::Rel(RelCmd::Dr(a)) => job("rel dr", a, rel_dr),
        Command::Rel(RelCmd::Perp(a)) => job("rel perp", a, rel_perp),
        Command::Rel(RelCmd::Almost(a)) => job("rel almost", a, rel_almost),
        Command::Rel(RelCmd::Chain(a)) => job("rel chain", a, rel_chain),
        Command::Rel(RelCmd::Ccfactor(a)) => job("rel ccfactor", a, rel_ccfactor),
        Command::Ek(EkCmd::Build(a)) => job("ek build", a, ek_build),
        Command::Ek(EkCmd::Verify(a)) => job("ek verify", a, ek_verify),
        Command::Ek(EkCmd::Zerobound(a)) => job("ek zerobound", a, ek_zerobound),
        Command::Ek(EkCmd::Redpow(a)) => job("ek redpow", a, ek_redpow),
        Command::VerifyAll(a) => job("verify-all", a, verify_all),
    }
}

fn cwd() -> &'static Path {
    Path::new("")
}

fn parse_json_arg<T: serde::de::DeserializeOwned>(flag: &str, text: &str) -> Result<T, InputError> {
    serde_json::from_str(text).map_err(|e| InputError(format!("--{flag}: {e}")))
}

fn flavor(a: &FiniteAlgebra, explicit: Option<FlavorArg>) -> Result<Flavor, InputError> {
    docs::infer_flavor(
        a,
        explicit.map(|f| match f {
            FlavorArg::Ring => Flavor::Ring,
            FlavorArg::Group => Flavor::Group,
        }),
    )
}

fn filter_check(a: &FileArg) -> Outcome {
    let doc = docs::filter_doc(&a.file)?;
    let family = SubsetFamily::from_lists(IndexSet::new(doc.index_size)?, &doc.sets)?;
    let closure = close_to_filter(&family);
    let mut f = Findings::pass(json!({ "closure_base": closure.base() }));
    if let Check::Fails(v) = is_filter(&family) {
        f.witness(json!({ "violation": v, "message": v.to_string() }));
    }
    Ok(f)
}

fn filter_decompose(a: &FileArg) -> Outcome {
    let filter = docs::filter(&a.file)?;
    let points: Vec<usize> = decompose_filter(&filter).iter().map(Ultrafilter::point).collect();
    Ok(Findings::pass(json!({ "base": filter.base(), "points": points })))
}

fn filter_bdd(a: &BddArgs) -> Outcome {
    let filter = docs::filter(&a.file)?;
    let mut f = Findings::pass(json!({ "base": filter.base(), "least_bdd_n": least_bdd_n(&filter) }));
    if let Some(n) = a.n {
        if let Check::Fails(partition) = check_bdd(&filter, n) {
            f.witness(json!({ "n": n, "partition": partition }));
        }
    }
    Ok(f)
}

fn algebra_summary(a: &FiniteAlgebra) -> Value {
    let symbols: Vec<Value> =
        a.signature().symbols().iter().map(|s| json!({ "symbol": s.name, "arity": s.arity })).collect();
    json!({ "name": a.name(), "size": a.size(), "signature": symbols })
}

fn algebra_check(a: &AlgebraArg) -> Outcome {
    let alg = docs::algebra(&a.algebra, cwd())?;
    let axioms = suites::axioms_for(alg.signature());
    let mut f = Findings::pass(json!({ "algebra": algebra_summary(&alg), "axioms_checked": axioms.len() }));
    for (lhs, rhs) in &axioms {
        if let Check::Fails(env) = is_identity(&alg, lhs, rhs)? {
            f.witness(json!({ "axiom": format!("{lhs} = {rhs}"), "assignment": env }));
        }
    }
    Ok(f)
}

fn algebra_identity(a: &IdentityArgs) -> Outcome {
    let alg = docs::algebra(&a.algebra, cwd())?;
    let (lhs, rhs) = parse_equation(&a.equation, alg.signature())?;
    let mut f = Findings::pass(json!({ "algebra": alg.name(), "equation": format!("{lhs} = {rhs}") }));
    if let Check::Fails(env) = is_identity(&alg, &lhs, &rhs)? {
        f.witness(json!({ "assignment": env }));
    }
    Ok(f)
}

fn redprod_build(a: &BuildArgs) -> Outcome {
    let family = docs::family(&a.factors, cwd())?;
    let filter = docs::filter(&a.filter)?;
    if filter.parent().size() != family.len() {
        return Err(InputError(format!(
            "filter is on {} indices but there are {} factors",
            filter.parent().size(),
            family.len()
        )));
    }
    let rp = reduced_product(&family, &filter)?;
    Ok(Findings::pass(json!({
        "filter_base": filter.base(),
        "class_count": rp.class_count(),
        "representatives": rp.representatives(),
        "algebra": rp.algebra().to_doc(),
    })))
}

fn redprod_detect(a: &FileArg) -> Outcome {
    let map = MapOnProduct::load(&a.file)?;
    let filter = detected_filter(&map.table, &map.family)?;
    let family = filter.to_family()?;
    let points: Vec<usize> = decompose_filter(&filter).iter().map(Ultrafilter::point).collect();
    let mut f = Findings::pass(json!({ "filter_base": filter.base(), "ultrafilter_points": points }));
    if let Check::Fails(v) = is_filter(&family) {
        f.witness(json!({ "violation": v }));
    }
    Ok(f)
}

fn hom_or_witness(map: &MapOnProduct, f: &mut Findings) -> Result<Option<reductlab::ualg::HomTable>, InputError> {
    match map.hom()? {
        Ok(h) => Ok(Some(h)),
        Err(e) => {
            f.witness(json!({ "homomorphism_law": e.to_string() }));
            Ok(None)
        }
    }
}

fn redprod_factor(a: &FileArg) -> Outcome {
    let map = MapOnProduct::load(&a.file)?;
    let mut f = Findings::default();
    let fz = match &map.codomain {
        None => factor_map(&map.table, &map.family)?,
        Some(_) => match hom_or_witness(&map, &mut f)? {
            Some(h) => factor_homomorphism(&h, &map.family)?,
            None => return Ok(f),
        },
    };
    if let Some(x) = (0..map.table.len()).find(|&x| fz.composite(x) != map.table[x]) {
        f.witness(json!({ "element": x, "composite": fz.composite(x), "map": map.table[x] }));
    }
    f.output = serde_json::to_value(fz.to_doc())?;
    Ok(f)
}

fn redprod_surj(a: &SurjArgs) -> Outcome {
    let family = docs::family(&a.factors, cwd())?;
    let ultras = a
        .points
        .iter()
        .map(|&p| Ultrafilter::new(family.index_set(), p))
        .collect::<Result<Vec<_>, _>>()?;
    let report = verify_surjectivity(&family, &ultras)?;
    let mut f = Findings::pass(serde_json::to_value(&report)?);
    if !report.holds() {
        f.witness(json!({
            "surjective": report.surjective,
            "bijective": report.bijective,
            "sections_valid": report.sections_valid,
            "image_size": report.image_size,
            "target_size": report.target_size,
        }));
    }
    Ok(f)
}

fn relations(alg: &FiniteAlgebra, paths: &[std::path::PathBuf]) -> Result<Vec<FormalRelation>, InputError> {
    if paths.is_empty() {
        return catalog_for(alg).ok_or_else(|| {
            InputError(format!("no built-in relation catalog for the signature of {}; pass --relation", alg.name()))
        });
    }
    let rels = paths.iter().map(|p| docs::relation(p)).collect::<Result<Vec<_>, _>>()?;
    for (r, p) in rels.iter().zip(paths) {
        for t in [r.lhs(), r.rhs()] {
            t.check_against(alg.signature())
                .map_err(|e| InputError(format!("{}: {e} in the signature of {}", p.display(), alg.name())))?;
        }
    }
    Ok(rels)
}

fn rel_dr(a: &DrArgs) -> Outcome {
    let alg = docs::algebra(&a.algebra, cwd())?;
    let rels = relations(&alg, &a.relations)?;
    let mut f = Findings::default();
    let mut checked = Vec::new();
    for r in &rels {
        let check = check_dr(&alg, r)?;
        checked.push(json!({ "relation": r, "holds": check.holds() }));
        if let Check::Fails(w) = check {
            f.witness(json!({ "relation": r, "case": w.case, "assignment": w.assignment, "message": w.to_string() }));
        }
    }
    f.output = json!({ "algebra": alg.name(), "relations": checked });
    Ok(f)
}

fn rel_perp(a: &PerpArgs) -> Outcome {
    let alg = docs::algebra(&a.algebra, cwd())?;
    if a.search {
        if !a.relations.is_empty() || a.blocks.is_some() {
            return Err(InputError("--search uses the built-in catalog on every congruence".into()));
        }
        catalog_for(&alg)
            .ok_or_else(|| InputError(format!("no built-in relation catalog for the signature of {}", alg.name())))?;
        let found = transitivity_search(std::slice::from_ref(&alg))?;
        return Ok(Findings::pass(json!({ "algebra": alg.name(), "non_transitive": found })));
    }
    let rels = relations(&alg, &a.relations)?;
    let c = match &a.blocks {
        Some(text) => {
            let blocks: Vec<Vec<usize>> = parse_json_arg("blocks", text)?;
            BinaryRelation::from_congruence(&Congruence::from_blocks(alg.size(), &blocks)?)
        }
        None => BinaryRelation::full(alg.size()),
    };
    match perp_report(&alg, &rels, &c, a.closed) {
        Ok(report) => Ok(Findings::pass(serde_json::to_value(&report)?)),
        Err(relcheck::RelError::PropertyFailed { property, witness }) => {
            let mut f = Findings::default();
            f.witness(json!({ "property": property, "witness": witness }));
            Ok(f)
        }
        Err(e) => Err(e.into()),
    }
}

fn rel_almost(a: &AlmostArgs) -> Outcome {
    let alg = docs::algebra(&a.algebra, cwd())?;
    let report = relcheck::verify_almost_facts(&alg, flavor(&alg, a.flavor)?)?;
    let mut f = Findings::pass(serde_json::to_value(&report)?);
    for v in report.violations() {
        f.witness(serde_json::to_value(v)?);
    }
    Ok(f)
}

fn surjection(file: &Path, f: &mut Findings) -> Result<Option<(MapOnProduct, reductlab::ualg::HomTable)>, InputError> {
    let map = MapOnProduct::load(file)?;
    Ok(hom_or_witness(&map, f)?.map(|h| (map, h)))
}

fn rel_chain(a: &ChainArgs) -> Outcome {
    let parts: Vec<Vec<usize>> = parse_json_arg("parts", &a.parts)?;
    let mut f = Findings::default();
    let Some((map, h)) = surjection(&a.file, &mut f)? else {
        return Ok(f);
    };
    let fl = flavor(h.codomain(), a.flavor)?;
    let report = relcheck::chain_strictness(&h, &map.family, &parts, fl)?;
    for (m, step) in report.steps.iter().enumerate() {
        if step.block_nontrivial && !step.strict {
            f.witness(json!({ "step": m, "block": step.block }));
        }
    }
    f.output = serde_json::to_value(&report)?;
    Ok(f)
}

fn rel_ccfactor(a: &CcArgs) -> Outcome {
    let mut f = Findings::default();
    let Some((map, h)) = surjection(&a.file, &mut f)? else {
        return Ok(f);
    };
    let fl = flavor(h.codomain(), a.flavor)?;
    let cc = relcheck::cc_factorization_demo(&h, &map.family, fl)?;
    if let Some(x) = (0..map.table.len()).find(|&x| cc.factorization.composite(x) != cc.centered.apply(x)) {
        f.witness(json!({ "element": x, "composite": cc.factorization.composite(x), "centered": cc.centered.apply(x) }));
    }
    f.output = json!({
        "center": cc.center,
        "quotient_size": cc.quotient.size(),
        "centered_table": cc.centered.map(),
        "factorization": cc.factorization.to_doc(),
    });
    Ok(f)
}

fn field_arg(text: &str) -> Result<ExactField, InputError> {
    if text == "rational" {
        return Ok(ExactField::Rational);
    }
    let p: u64 = text.parse().map_err(|_| InputError(format!("--field must be a prime or `rational`, found {text:?}")))?;
    Ok(ExactField::prime(p)?)
}

fn ek_build(a: &EkBuildArgs) -> Outcome {
    let field = field_arg(&a.field)?;
    if a.size == 0 {
        return Err(InputError("--size must be at least 1".into()));
    }
    if a.search {
        let ExactField::Prime(p) = field else {
            return Err(InputError("--search needs a prime field".into()));
        };
        let mut f = Findings::default();
        match eklab::search_sli(a.size, p)? {
            Some(x) => {
                f.output = json!({ "field": field.to_string(), "matrix": x, "checked_minors": eklab::minor_count(a.size, a.size) });
            }
            None => f.witness(json!({ "none_exists": format!("no strongly independent {0}×{0} matrix over F{p}", a.size) })),
        }
        return Ok(f);
    }
    let order = match a.seed_order {
        SeedOrder::Canonical => ValueOrder::Canonical,
        SeedOrder::Nonnegative => ValueOrder::NonNegative,
    };
    let cert = eklab::build_sli_matrix(a.size, field, order).map_err(|e| match e {
        eklab::EkError::FieldTooSmall { .. } => InputError(format!("{e}; --search handles smaller primes")),
        e => e.into(),
    })?;
    Ok(Findings::pass(json!({
        "field": field.to_string(),
        "matrix": cert.matrix(),
        "checked_minors": cert.checked_minors(),
    })))
}

fn ek_verify(a: &MatrixArg) -> Outcome {
    let x = docs::matrix(&a.matrix)?;
    let mut f = Findings::pass(json!({
        "field": x.field().to_string(),
        "rows": x.rows(),
        "cols": x.cols(),
        "minors": eklab::minor_count(x.rows(), x.cols()),
    }));
    if let Check::Fails(w) = eklab::verify_sli(&x) {
        f.witness(serde_json::to_value(w)?);
    }
    Ok(f)
}

fn ek_zerobound(a: &ZeroboundArgs) -> Outcome {
    let x = docs::matrix(&a.matrix)?;
    match &a.coeffs {
        Some(texts) => {
            let coeffs = texts
                .iter()
                .map(|t| BigRational::from_str(t.trim()).map_err(|e| InputError(format!("coefficient {t:?}: {e}"))))
                .collect::<Result<Vec<_>, _>>()?;
            let count = eklab::zero_count_bound(&x, &coeffs)?;
            let mut f = Findings::pass(serde_json::to_value(&count)?);
            if !count.within_bound() {
                f.witness(json!({ "coeffs": texts, "zero_count": count.zero_count, "nonzero_coefficients": count.nonzero_coefficients }));
            }
            Ok(f)
        }
        None => {
            let ExactField::Prime(p) = x.field() else {
                return Err(InputError("pass --coeffs for a matrix over the rationals".into()));
            };
            let mut f = Findings::default();
            match suites::eklab_zero_count(&x, p) {
                Ok(vectors) => f.output = json!({ "field": x.field().to_string(), "vectors": vectors }),
                Err(w) => f.witness(json!(w)),
            }
            Ok(f)
        }
    }
}

fn ek_redpow(a: &RedpowArgs) -> Outcome {
    let filter: Filter = docs::filter(&a.filter)?;
    if a.x_size.is_none() && a.q.is_none() {
        return Err(InputError("pass --x-size, --q, or both".into()));
    }
    let mut f = Findings::default();
    let mut out = serde_json::Map::new();
    out.insert("filter_base".into(), json!(filter.base()));
    out.insert("decomposition_size".into(), json!(decompose_filter(&filter).len()));
    if let Some(n) = a.x_size {
        out.insert("cardinality".into(), json!(eklab::reduced_power_cardinality(n, &filter)?.to_string()));
    }
    if let Some(q) = a.q {
        let report = eklab::finite_field_dimension_check(q, &filter)?;
        if !report.holds() {
            f.witness(serde_json::to_value(&report)?);
        }
        out.insert("dimension".into(), serde_json::to_value(&report)?);
    }
    f.output = Value::Object(out);
    Ok(f)
}

fn parse_fault(text: &str) -> Result<Fault, InputError> {
    let parts: Vec<&str> = text.split(':').collect();
    let [algebra, symbol, position, value] = parts[..] else {
        return Err(InputError(format!("--inject-fault expects ALGEBRA:SYMBOL:POSITION:VALUE, found {text:?}")));
    };
    let number = |s: &str| s.parse::<usize>().map_err(|_| InputError(format!("--inject-fault: {s:?} is not a number")));
    Ok(Fault { algebra: algebra.into(), symbol: symbol.into(), position: number(position)?, value: number(value)? })
}

fn verify_all(a: &VerifyAllArgs) -> Outcome {
    let caps = Caps { max_index: a.max_index, max_size: a.max_size, max_matrix: a.max_matrix };
    let fault = a.inject_fault.as_deref().map(parse_fault).transpose()?;
    let report = suites::verify_all(&caps, fault.as_ref())?;
    let mut f = Findings::pass(serde_json::to_value(&report)?);
    for s in report.failures() {
        f.witness(json!({ "suite": s.suite, "witness": s.witness }));
    }
    Ok(f)
}
