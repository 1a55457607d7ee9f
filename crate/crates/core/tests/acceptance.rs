//! Acceptance criteria. Prints one PASS/FAIL line per criterion and exits
//! nonzero when any criterion fails.

use std::collections::{BTreeMap, BTreeSet};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use itertools::Itertools;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use reductlab::corpus;
use reductlab::eklab::{self, ExactField, ExactMatrix, ValueOrder};
use reductlab::redprod::{detected_filter, factor_homomorphism, ProductFamily};
use reductlab::relcheck::{
    self, check_dr, compute_perp, group_relations, lattice_relations, ring_relations, BinaryRelation, Flavor,
};
use reductlab::setfam::{close_to_filter, decompose_filter, is_filter, least_bdd_n, IndexSet, SubsetFamily};
use reductlab::suites::{self, Corpus};
use reductlab::ualg::{product_algebra, FiniteAlgebra, HomTable};

type Verdict = Result<String, String>;

/// Name, runtime limit in seconds, check.
type Criterion = (&'static str, Option<u64>, fn() -> Verdict);

fn ensure(cond: bool, witness: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(witness())
    }
}

fn refs(v: &[FiniteAlgebra]) -> Vec<&FiniteAlgebra> {
    v.iter().collect()
}

fn criterion_1() -> Verdict {
    let filters = suites::redprod_converse(3, &[2, 3])?;
    let family = ProductFamily::power(&corpus::cyclic_group(2), 3).map_err(|e| e.to_string())?;
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for k in 0..1000 {
        let h: Vec<usize> = (0..family.carrier_size()).map(|_| rng.gen_range(0..2)).collect();
        let f = detected_filter(&h, &family).map_err(|e| format!("sample {k}, map {h:?}: {e}"))?;
        ensure(is_filter(&f.to_family().map_err(|e| e.to_string())?).holds(), || format!("sample {k}: not a filter"))?;
    }
    Ok(format!("{filters} filter/size cases exact, 1000 sampled maps on Z2^3 detect filters"))
}

fn criterion_2() -> Verdict {
    let mut distinct = BTreeSet::new();
    for n in 1..=4 {
        let p = IndexSet::new(n).map_err(|e| e.to_string())?;
        let subsets: Vec<_> = p.power_set().collect();
        for bits in 0u64..1 << subsets.len() {
            let fam = SubsetFamily::new(p, subsets.iter().enumerate().filter(|(k, _)| bits >> k & 1 == 1).map(|(_, s)| *s))
                .map_err(|e| e.to_string())?;
            distinct.insert(close_to_filter(&fam));
        }
    }
    for f in &distinct {
        let d = decompose_filter(f).len();
        ensure(least_bdd_n(f) == d, || format!("base {:?}: least_bdd_n {} vs {d}", f.base().elements(), least_bdd_n(f)))?;
    }
    let on_four = distinct.iter().filter(|f| f.parent().size() == 4).count();
    ensure(on_four <= 17, || format!("{on_four} distinct filters on |I| = 4"))?;
    let cases = suites::setfam_decomposition(4)?;
    Ok(format!("{} distinct filters ({on_four} on |I| = 4), {cases} uniqueness cases", distinct.len()))
}

fn criterion_3() -> Verdict {
    let cases = suites::redprod_surjectivity(3, &[1, 2, 3])?;
    Ok(format!("{cases} ultrafilter sets, surjective and bijective"))
}

fn projection(family: &ProductFamily, domain: &FiniteAlgebra, i: usize) -> Result<HomTable, String> {
    let map = (0..family.carrier_size()).map(|a| family.coord(a, i)).collect();
    HomTable::new(domain.clone(), family.factors()[i].clone(), map).map_err(|e| e.to_string())
}

fn hom_corpus() -> Result<Vec<(ProductFamily, HomTable, &'static str)>, String> {
    let z2 = corpus::cyclic_group(2);
    let z3 = corpus::cyclic_group(3);
    let z4 = corpus::cyclic_group(4);
    let s3 = corpus::symmetric_group(3);
    let families = [
        vec![z2.clone(), z2.clone(), z2.clone()],
        vec![z3.clone(), z3.clone()],
        vec![z2.clone(), z3.clone()],
        vec![z4.clone(), z2.clone()],
        vec![s3.clone(), z2.clone()],
    ];
    let mut out = Vec::new();
    for factors in families {
        let family = ProductFamily::new(factors).map_err(|e| e.to_string())?;
        let domain = family.product().map_err(|e| e.to_string())?;
        let sig = domain.signature().clone();
        for i in 0..family.len() {
            out.push((family.clone(), projection(&family, &domain, i)?, "projection"));
            let b = &family.factors()[i];
            let (bb, codec) = product_algebra(&sig, &[b.clone(), b.clone()]).map_err(|e| e.to_string())?;
            let map = (0..family.carrier_size()).map(|a| codec.encode(&[family.coord(a, i), family.coord(a, i)])).collect();
            out.push((family.clone(), HomTable::new(domain.clone(), bb, map).map_err(|e| e.to_string())?, "diagonal"));
        }
        for target in [corpus::cyclic_group(1), z2.clone()] {
            let map = vec![0; family.carrier_size()];
            out.push((family.clone(), HomTable::new(domain.clone(), target, map).map_err(|e| e.to_string())?, "trivial"));
        }
        let first = &family.factors()[0];
        if family.factors().iter().all(|a| a == first) && first.name().starts_with('Z') {
            let n = first.size();
            for coeffs in (0..family.len()).map(|_| 0..n).multi_cartesian_product() {
                let map = (0..family.carrier_size())
                    .map(|a| coeffs.iter().enumerate().map(|(i, c)| c * family.coord(a, i)).sum::<usize>() % n)
                    .collect();
                out.push((family.clone(), HomTable::new(domain.clone(), first.clone(), map).map_err(|e| e.to_string())?, "sum"));
            }
        }
    }
    Ok(out)
}

fn criterion_4() -> Verdict {
    let homs = hom_corpus()?;
    ensure(homs.len() >= 20, || format!("only {} homomorphisms", homs.len()))?;
    let mut kinds: BTreeMap<&str, usize> = BTreeMap::new();
    for (family, h, kind) in &homs {
        let fz = factor_homomorphism(h, family).map_err(|e| e.to_string())?;
        if let Some(a) = (0..family.carrier_size()).find(|&a| fz.composite(a) != h.apply(a)) {
            return Err(format!("{kind} {} → {}: differs at {a}", h.domain().name(), h.codomain().name()));
        }
        let least = least_bdd_n(&detected_filter(h.map(), family).map_err(|e| e.to_string())?);
        ensure(fz.ultrafilters().len() == least, || format!("{kind} {}: {} ultrafilters vs {least}", h.domain().name(), fz.ultrafilters().len()))?;
        *kinds.entry(kind).or_default() += 1;
    }
    Ok(format!("{} homomorphisms {kinds:?}", homs.len()))
}

fn criterion_5() -> Verdict {
    let rings = corpus::rings_up_to_8();
    let groups = corpus::groups_up_to_order_8();
    let mut instances = 0;
    for (set, flavor) in [(&rings, Flavor::Ring), (&groups, Flavor::Group)] {
        for a in set {
            let report = relcheck::verify_almost_facts(a, flavor).map_err(|e| e.to_string())?;
            if let Some(v) = report.violations().next() {
                return Err(format!("{}: {:?} on {:?}", a.name(), v.fact, v.subjects.iter().map(ToString::to_string).collect::<Vec<_>>()));
            }
            instances += report.instances.len();
        }
    }
    Ok(format!("{} rings, {} groups, {instances} fact instances, 0 violations", rings.len(), groups.len()))
}

fn criterion_6() -> Verdict {
    let s3 = corpus::symmetric_group(3);
    let z4 = corpus::cyclic_group(4);
    let mut cases = 0;
    for factors in [vec![s3.clone()], vec![z4.clone()], vec![s3.clone(), z4.clone()], vec![z4.clone(), s3.clone()], vec![s3.clone(), s3.clone()], vec![z4.clone(), z4.clone()]] {
        let family = ProductFamily::new(factors).map_err(|e| e.to_string())?;
        for f in suites::projection_corpus(&family, Flavor::Group)? {
            let cc = relcheck::cc_factorization_demo(&f, &family, Flavor::Group).map_err(|e| e.to_string())?;
            ensure(cc.composite_matches(), || format!("{} → {}: composite differs", f.domain().name(), f.codomain().name()))?;
            cases += 1;
        }
    }
    Ok(format!("{cases} projections and twisted projections"))
}

fn criterion_7() -> Verdict {
    let mut dr = 0;
    for (rels, algebras) in [
        (ring_relations(), vec![corpus::field_ring(2), corpus::field_ring(3)]),
        (group_relations(), vec![corpus::symmetric_group(3), corpus::cyclic_group(4)]),
        (lattice_relations(), vec![corpus::chain_lattice(2), corpus::chain_lattice(4), corpus::boolean_lattice(2)]),
    ] {
        for a in &algebras {
            for r in &rels {
                let check = check_dr(a, r).map_err(|e| e.to_string())?;
                ensure(check.holds(), || format!("{}: {r}: {:?}", a.name(), check.witness()))?;
                dr += 1;
            }
        }
    }
    let s3 = corpus::symmetric_group(3);
    let (mul, inv) = (s3.op_index("mul").map_err(|e| e.to_string())?, s3.op_index("inv").map_err(|e| e.to_string())?);
    let center: Vec<usize> =
        (0..6).filter(|&z| (0..6).all(|x| s3.apply2(mul, z, x) == s3.apply2(mul, x, z))).collect();
    let expected: Vec<(usize, usize)> = (0..6)
        .cartesian_product(0..6)
        .filter(|&(a, b)| center.contains(&s3.apply2(mul, a, s3.apply(inv, &[b]))))
        .collect();
    let perp = compute_perp(&s3, &group_relations(), &BinaryRelation::full(6)).map_err(|e| e.to_string())?;
    ensure(perp.pairs() == expected, || format!("perp of full relation on S3: {:?}", perp.pairs()))?;
    let small: Vec<FiniteAlgebra> = Corpus::within(4).all().cloned().collect();
    let mono = suites::relcheck_perp_monotone(&refs(&small))?;
    Ok(format!("{dr} substitution checks, S3 perp = {} pairs, {mono} monotonicity pairs", perp.len()))
}

fn cofactor(m: &[Vec<BigRational>]) -> BigRational {
    if m.is_empty() {
        return BigRational::one();
    }
    (0..m.len())
        .map(|j| {
            let minor: Vec<Vec<BigRational>> =
                m[1..].iter().map(|r| r.iter().enumerate().filter(|&(k, _)| k != j).map(|(_, v)| v.clone()).collect()).collect();
            let t = &m[0][j] * cofactor(&minor);
            if j % 2 == 0 { t } else { -t }
        })
        .fold(BigRational::zero(), |a, b| a + b)
}

/// Counts nonzero minors by cofactor expansion, reducing modulo `p` if given.
fn nonzero_minors(x: &ExactMatrix, p: Option<i64>) -> (usize, usize) {
    let n = x.rows();
    let mut total = 0;
    let mut nonzero = 0;
    for k in 1..=n {
        for rows in (0..n).combinations(k) {
            for cols in (0..n).combinations(k) {
                let m: Vec<Vec<BigRational>> = rows.iter().map(|&i| cols.iter().map(|&j| x.get(i, j).clone()).collect()).collect();
                let d = cofactor(&m);
                let zero = match p {
                    None => d.is_zero(),
                    Some(p) => (d.to_integer() % p).is_zero(),
                };
                total += 1;
                nonzero += usize::from(!zero);
            }
        }
    }
    (total, nonzero)
}

fn criterion_8() -> Verdict {
    let f257 = eklab::build_sli_matrix(6, ExactField::prime(257).map_err(|e| e.to_string())?, ValueOrder::Canonical)
        .map_err(|e| e.to_string())?;
    ensure(f257.checked_minors() == 923, || format!("F257 certificate checked {}", f257.checked_minors()))?;
    let (total, nonzero) = nonzero_minors(f257.matrix(), Some(257));
    ensure(total == 923 && nonzero == 923, || format!("F257: {nonzero}/{total} minors nonzero"))?;
    let q = eklab::build_sli_matrix(5, ExactField::Rational, ValueOrder::Canonical).map_err(|e| e.to_string())?;
    ensure(q.checked_minors() == 251, || format!("rational certificate checked {}", q.checked_minors()))?;
    let (total, nonzero) = nonzero_minors(q.matrix(), None);
    ensure(total == 251 && nonzero == 251, || format!("Q: {nonzero}/{total} minors nonzero"))?;
    let cauchy = suites::eklab_cauchy(5)?;
    let x = eklab::search_sli(4, 7).map_err(|e| e.to_string())?.ok_or("no 4×4 over F7")?;
    ensure(eklab::verify_sli(&x).holds(), || "4×4 over F7 fails verification".into())?;
    let (total, nonzero) = nonzero_minors(&x, Some(7));
    ensure(total == nonzero, || format!("F7: {nonzero}/{total} minors nonzero"))?;
    let vectors = suites::eklab_zero_count(&x, 7)?;
    ensure(vectors == 7u64.pow(4) - 1, || format!("{vectors} coefficient vectors"))?;
    Ok(format!("923 + 251 minors nonzero, {cauchy} Cauchy matrices, {vectors} vectors over F7"))
}

fn criterion_9() -> Verdict {
    let counts = suites::eklab_reduced_power(4, 3)?;
    let dims = suites::eklab_dimension(3, &[2, 3])?;
    Ok(format!("{counts} cardinalities, {dims} dimensions"))
}

fn criterion_10() -> Verdict {
    let mut faults = 0;
    let mut by_check: BTreeMap<&str, usize> = BTreeMap::new();
    for a in suites::acceptance_corpus() {
        for fault in suites::single_entry_faults(&a) {
            let cov = suites::fault_coverage(&a, &fault).map_err(|e| e.to_string())?;
            ensure(cov.caught() && cov.witness.is_some(), || format!("uncaught {fault:?}"))?;
            for c in &cov.caught_by {
                *by_check.entry(c).or_default() += 1;
            }
            faults += 1;
        }
    }
    let mut entries = 0;
    for cert in [
        eklab::build_sli_matrix(6, ExactField::prime(257).map_err(|e| e.to_string())?, ValueOrder::Canonical),
        eklab::build_sli_matrix(5, ExactField::Rational, ValueOrder::Canonical),
    ] {
        let x = cert.map_err(|e| e.to_string())?.matrix().clone();
        for (r, c) in (0..x.rows()).cartesian_product(0..x.cols()) {
            ensure(suites::matrix_fault_caught(&x, r, c)?, || format!("zeroed entry ({r},{c}) not caught"))?;
            entries += 1;
        }
    }
    Ok(format!("{faults} table faults caught {by_check:?}, {entries} matrix faults caught"))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("reduced-product filters detected both ways", Some(30), criterion_1),
        ("least bdd equals decomposition size", Some(10), criterion_2),
        ("ultrafilter families jointly surjective", Some(10), criterion_3),
        ("homomorphisms factor through ultraproducts", Some(30), criterion_4),
        ("almost-direct-factor facts", None, criterion_5),
        ("center-quotient factorizations", None, criterion_6),
        ("substitution checks, S3 perp, monotonicity", Some(60), criterion_7),
        ("strongly independent matrices", Some(60), criterion_8),
        ("reduced power sizes and dimensions", None, criterion_9),
        ("fault sensitivity", None, criterion_10),
    ];
    let mut failed = 0;
    for (k, (name, limit, run)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let verdict = run();
        let elapsed = start.elapsed();
        let verdict = match (verdict, limit) {
            (Ok(_), Some(s)) if elapsed > Duration::from_secs(s) => Err(format!("took {elapsed:.2?}, limit {s} s")),
            (v, _) => v,
        };
        let limit = limit.map(|s| format!(", limit {s} s")).unwrap_or_default();
        match verdict {
            Ok(detail) => println!("PASS  criterion {:>2}  {name}  ({elapsed:.2?}{limit})  {detail}", k + 1),
            Err(witness) => {
                failed += 1;
                println!("FAIL  criterion {:>2}  {name}  ({elapsed:.2?}{limit})  {witness}", k + 1);
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
