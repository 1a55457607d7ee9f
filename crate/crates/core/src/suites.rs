//! Exhaustive invariant suites over the built-in corpus, and the
//! fault-injection harness that checks the suites are not vacuous.

use std::collections::BTreeSet;
use std::fmt::Display;
use std::time::Instant;

use itertools::Itertools;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::check::Check;
use crate::corpus;
use crate::eklab::{self, ExactField, ExactMatrix, ValueOrder};
use crate::gf::is_prime;
use crate::redprod::{
    detected_filter, factor_homomorphism, kernel_filter, reduced_product, verify_surjectivity, ProductFamily,
};
use crate::relcheck::{
    catalog_for, cc_factorization_demo, chain_strictness, check_dr, check_r_prod, compute_perp, perp_report,
    ring_relations_two_sided, verify_almost_facts, BinaryRelation, Flavor, FormalRelation,
};
use crate::setfam::{
    check_bdd, close_to_filter, cofilter_of, decompose_filter, grill_of, ideal_of, intersect_ultrafilters,
    is_filter, least_bdd_n, Filter, IndexSet, SubsetFamily, Ultrafilter,
};
use crate::ualg::{
    all_congruences, check_hom_law, is_identity, parse_equation, quotient_algebra, CompiledTerm,
    FiniteAlgebra, HomTable, Signature, Term, TupleCodec, Var,
};

/// Exploration caps for [`verify_all`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Caps {
    /// Largest index set `|I|`.
    pub max_index: usize,
    /// Largest algebra carrier.
    pub max_size: usize,
    /// Largest matrix side.
    pub max_matrix: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Caps { max_index: 3, max_size: 4, max_matrix: 4 }
    }
}

/// The largest caps the suites accept.
pub const CAP_LIMITS: Caps = Caps { max_index: 4, max_size: 6, max_matrix: 6 };

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SuiteError {
    #[error("cap {name} = {value} exceeds the limit {limit}")]
    CapTooLarge { name: &'static str, value: usize, limit: usize },
    #[error("cap {name} must be at least 1")]
    CapTooSmall { name: &'static str },
    #[error("no corpus algebra named {0:?} within the caps")]
    UnknownAlgebra(String),
    #[error("fault does not apply: {0}")]
    BadFault(String),
}

impl Caps {
    pub fn validate(&self) -> Result<(), SuiteError> {
        for (name, value, limit) in [
            ("max_index", self.max_index, CAP_LIMITS.max_index),
            ("max_size", self.max_size, CAP_LIMITS.max_size),
            ("max_matrix", self.max_matrix, CAP_LIMITS.max_matrix),
        ] {
            if value == 0 {
                return Err(SuiteError::CapTooSmall { name });
            }
            if value > limit {
                return Err(SuiteError::CapTooLarge { name, value, limit });
            }
        }
        Ok(())
    }
}

/// A single replaced operation-table entry.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Fault {
    pub algebra: String,
    pub symbol: String,
    pub position: usize,
    pub value: usize,
}

impl Fault {
    pub fn apply(&self, a: &FiniteAlgebra) -> Result<FiniteAlgebra, SuiteError> {
        let op = a
            .op_index(&self.symbol)
            .map_err(|_| SuiteError::BadFault(format!("{} has no symbol {:?}", a.name(), self.symbol)))?;
        if a.table(op).get(self.position) == Some(&self.value) {
            return Err(SuiteError::BadFault(format!("entry {} of {} already equals {}", self.position, self.symbol, self.value)));
        }
        a.with_entry(op, self.position, self.value).map_err(|e| SuiteError::BadFault(e.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SuiteResult {
    pub suite: String,
    pub cases: u64,
    pub passed: bool,
    pub witness: Option<String>,
    pub millis: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerifyAllReport {
    pub caps: Caps,
    pub fault: Option<Fault>,
    pub suites: Vec<SuiteResult>,
}

impl VerifyAllReport {
    pub fn holds(&self) -> bool {
        self.suites.iter().all(|s| s.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &SuiteResult> {
        self.suites.iter().filter(|s| !s.passed)
    }
}

/// Case count on success, witness on failure.
pub type Outcome = Result<u64, String>;

fn err<E: Display>(e: E) -> String {
    format!("error: {e}")
}

fn ensure(cond: bool, witness: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(witness())
    }
}

/// Algebras the suites run on.
#[derive(Debug, Clone)]
pub struct Corpus {
    pub groups: Vec<FiniteAlgebra>,
    pub rings: Vec<FiniteAlgebra>,
    pub lattices: Vec<FiniteAlgebra>,
    /// Unmodified copies of every algebra, in [`Corpus::all`] order.
    pub references: Vec<FiniteAlgebra>,
}

impl Corpus {
    /// Built-in groups, rings and lattices up to `max_size` elements.
    pub fn within(max_size: usize) -> Corpus {
        let keep = |v: Vec<FiniteAlgebra>| -> Vec<FiniteAlgebra> { v.into_iter().filter(|a| a.size() <= max_size).collect() };
        let references = [corpus::groups_up_to_order_8(), corpus::rings_up_to_8(), corpus::small_lattices()]
            .into_iter()
            .flat_map(keep)
            .collect();
        Corpus {
            groups: keep(corpus::groups_up_to_order_8()),
            rings: keep(corpus::rings_up_to_8()),
            lattices: keep(corpus::small_lattices()),
            references,
        }
    }

    pub fn all(&self) -> impl Iterator<Item = &FiniteAlgebra> {
        self.groups.iter().chain(&self.rings).chain(&self.lattices)
    }

    fn replace(&mut self, fault: &Fault) -> Result<(), SuiteError> {
        for a in self.groups.iter_mut().chain(self.rings.iter_mut()).chain(self.lattices.iter_mut()) {
            if a.name() == fault.algebra {
                *a = fault.apply(a)?;
                return Ok(());
            }
        }
        Err(SuiteError::UnknownAlgebra(fault.algebra.clone()))
    }
}

/// The algebras whose every single-entry mutation must be caught.
pub fn acceptance_corpus() -> Vec<FiniteAlgebra> {
    vec![
        corpus::cyclic_group(2),
        corpus::cyclic_group(4),
        corpus::symmetric_group(3),
        corpus::field_ring(2),
        corpus::field_ring(3),
        corpus::chain_lattice(2),
        corpus::chain_lattice(4),
        corpus::boolean_lattice(2),
    ]
}

/// Axioms of the variety a corpus signature belongs to.
pub fn axioms_for(sig: &Signature) -> Vec<(Term, Term)> {
    let texts: &[&str] = if *sig == corpus::group_signature() {
        &[
            "mul(mul(x,y),z0) = mul(x,mul(y,z0))",
            "mul(e,x) = x",
            "mul(x,e) = x",
            "mul(inv(x),x) = e",
            "mul(x,inv(x)) = e",
        ]
    } else if *sig == corpus::ring_signature() {
        &[
            "add(add(x,y),z0) = add(x,add(y,z0))",
            "add(x,y) = add(y,x)",
            "add(x,zero) = x",
            "add(x,neg(x)) = zero",
            "mul(mul(x,y),z0) = mul(x,mul(y,z0))",
            "mul(x,add(y,z0)) = add(mul(x,y),mul(x,z0))",
            "mul(add(x,y),z0) = add(mul(x,z0),mul(y,z0))",
        ]
    } else if *sig == corpus::lattice_signature() {
        &[
            "join(join(x,y),z0) = join(x,join(y,z0))",
            "meet(meet(x,y),z0) = meet(x,meet(y,z0))",
            "join(x,y) = join(y,x)",
            "meet(x,y) = meet(y,x)",
            "join(x,meet(x,y)) = x",
            "meet(x,join(x,y)) = x",
        ]
    } else {
        &[]
    };
    texts.iter().map(|t| parse_equation(t, sig).expect("axioms parse")).collect()
}

fn flavor_of(a: &FiniteAlgebra) -> Option<Flavor> {
    if *a.signature() == corpus::ring_signature() {
        Some(Flavor::Ring)
    } else if *a.signature() == corpus::group_signature() {
        Some(Flavor::Group)
    } else {
        None
    }
}

/// Every term of depth at most `depth` over `vars` and the constants of `sig`.
pub fn terms_up_to_depth(sig: &Signature, vars: &[Var], depth: usize) -> Vec<Term> {
    let leaves: Vec<Term> = vars
        .iter()
        .map(|&v| Term::var(v))
        .chain(sig.symbols().iter().filter(|s| s.arity == 0).map(|s| Term::app(&s.name, vec![])))
        .collect();
    let mut all = leaves.clone();
    for _ in 0..depth {
        let mut next = leaves.clone();
        for sym in sig.symbols().iter().filter(|s| s.arity > 0) {
            for args in (0..sym.arity).map(|_| all.iter()).multi_cartesian_product() {
                next.push(Term::app(&sym.name, args.into_iter().cloned().collect()));
            }
        }
        all = next;
    }
    all
}

/// Direct recursive evaluation, independent of the compiled evaluator.
pub fn reference_eval(a: &FiniteAlgebra, t: &Term, value: &dyn Fn(Var) -> usize) -> usize {
    match t {
        Term::Var(v) => value(*v),
        Term::App { op, args } => {
            let vals: Vec<usize> = args.iter().map(|s| reference_eval(a, s, value)).collect();
            a.apply(a.op_index(op).expect("term over the algebra's signature"), &vals)
        }
    }
}

/// Values of `t` under every assignment of `vars`, the first variable most
/// significant; evaluated node by node over whole value vectors.
pub fn reference_table(a: &FiniteAlgebra, t: &Term, vars: &[Var]) -> Vec<usize> {
    let n = a.size();
    let total = n.pow(vars.len() as u32);
    match t {
        Term::Var(v) => {
            let k = vars.iter().position(|w| w == v).expect("variable in scope");
            let stride = n.pow((vars.len() - 1 - k) as u32);
            (0..total).map(|code| code / stride % n).collect()
        }
        Term::App { op, args } => {
            let op = a.op_index(op).expect("term over the algebra's signature");
            let cols: Vec<Vec<usize>> = args.iter().map(|s| reference_table(a, s, vars)).collect();
            let mut vals = vec![0; cols.len()];
            (0..total)
                .map(|code| {
                    for (v, c) in vals.iter_mut().zip(&cols) {
                        *v = c[code];
                    }
                    a.apply(op, &vals)
                })
                .collect()
        }
    }
}

fn filters_on(n: usize) -> Vec<Filter> {
    let p = IndexSet::new(n).expect("small index set");
    p.power_set().map(Filter::principal).collect()
}

fn size_tuples(max_len: usize, sizes: &[usize]) -> Vec<Vec<usize>> {
    (1..=max_len).flat_map(|k| (0..k).map(|_| sizes.iter().copied()).multi_cartesian_product()).collect()
}

fn carrier_family(sizes: &[usize]) -> ProductFamily {
    ProductFamily::new(sizes.iter().map(|&s| corpus::cyclic_group(s)).collect()).expect("small family")
}

fn identity_map(n: usize) -> Vec<usize> {
    (0..n).collect()
}

// ---- setfam ----

/// `close_to_filter` yields a filter for every family on `|I| ≤ max_index`.
pub fn setfam_closure_is_filter(max_index: usize) -> Outcome {
    let mut cases = 0;
    for n in 1..=max_index {
        let p = IndexSet::new(n).map_err(err)?;
        let subsets: Vec<_> = p.power_set().collect();
        for bits in 0u64..1 << subsets.len() {
            let fam = SubsetFamily::new(p, subsets.iter().enumerate().filter(|(k, _)| bits >> k & 1 == 1).map(|(_, s)| *s))
                .map_err(err)?;
            let closed = close_to_filter(&fam).to_family().map_err(err)?;
            if let Check::Fails(v) = is_filter(&closed) {
                return Err(format!("closure of family {bits:#b} on |I| = {n}: {v:?}"));
            }
            ensure(fam.iter().all(|s| closed.contains(s)), || format!("closure of {bits:#b} lost a member"))?;
            cases += 1;
        }
    }
    Ok(cases)
}

/// `least_bdd_n = |decompose_filter|`, and the decomposition is the only
/// set of ultrafilters whose intersection is the filter.
pub fn setfam_decomposition(max_index: usize) -> Outcome {
    let mut cases = 0;
    for n in 1..=max_index {
        let p = IndexSet::new(n).map_err(err)?;
        for f in filters_on(n) {
            let points: Vec<usize> = decompose_filter(&f).iter().map(Ultrafilter::point).collect();
            ensure(least_bdd_n(&f) == points.len(), || format!("least_bdd_n differs from |decomposition| for base {:?}", f.base().elements()))?;
            if let Some(k) = points.len().checked_sub(1) {
                ensure(!check_bdd(&f, k).holds(), || format!("check_bdd holds below the decomposition size for base {:?}", f.base().elements()))?;
            }
            for set in p.power_set() {
                let ultras: Vec<Ultrafilter> = set.elements().iter().map(|&i| Ultrafilter::new(p, i).expect("point")).collect();
                let equal = intersect_ultrafilters(p, &ultras) == f;
                ensure(equal == (set.elements() == points), || {
                    format!("ultrafilters at {:?} intersect to base {:?}: {equal}", set.elements(), f.base().elements())
                })?;
                cases += 1;
            }
        }
    }
    Ok(cases)
}

/// Ideal, grill and co-filter agree with their set-theoretic descriptions.
pub fn setfam_duality(max_index: usize) -> Outcome {
    let mut cases = 0;
    for n in 1..=max_index {
        let p = IndexSet::new(n).map_err(err)?;
        for f in filters_on(n) {
            let members: Vec<_> = f.members().collect();
            let ideal = ideal_of(&f).map_err(err)?;
            let grill = grill_of(&f).map_err(err)?;
            let cofilter = cofilter_of(&f).map_err(err)?;
            let base = f.base().elements();
            ensure(ideal.complements() == f.to_family().map_err(err)?, || format!("ideal complements differ for base {base:?}"))?;
            for j in p.power_set() {
                let meets_f = members.iter().all(|m| j.meets(*m));
                ensure(grill.contains(j) == meets_f, || format!("grill membership of {:?} for base {base:?}", j.elements()))?;
                let meets_grill = grill.iter().all(|g| j.meets(g));
                ensure(f.contains(j) == meets_grill, || format!("{:?} against the grill for base {base:?}", j.elements()))?;
                ensure(cofilter.contains(j) != f.contains(j), || format!("co-filter membership of {:?}", j.elements()))?;
                ensure(grill.contains(j) != ideal.contains(j), || format!("grill and ideal both hold {:?} for base {base:?}", j.elements()))?;
                cases += 1;
            }
        }
    }
    Ok(cases)
}

// ---- ualg ----

/// The identity map from each working algebra to its separately built
/// reference copy is a homomorphism.
pub fn ualg_reference_copies(pairs: &[(&FiniteAlgebra, &FiniteAlgebra)]) -> Outcome {
    let mut cases = 0;
    for (a, reference) in pairs {
        if let Check::Fails(w) = check_hom_law(a, reference, &identity_map(a.size())).map_err(err)? {
            return Err(format!("{}: identity to reference copy: {w}", a.name()));
        }
        cases += 1;
    }
    Ok(cases)
}

/// Every axiom of the algebra's variety holds.
pub fn ualg_axioms(algebras: &[&FiniteAlgebra]) -> Outcome {
    let mut cases = 0;
    for a in algebras {
        for (lhs, rhs) in axioms_for(a.signature()) {
            if let Check::Fails(env) = is_identity(a, &lhs, &rhs).map_err(err)? {
                return Err(format!("{}: {lhs} = {rhs} fails at {env:?}", a.name()));
            }
            cases += 1;
        }
    }
    Ok(cases)
}

/// The compiled evaluator agrees with [`reference_table`] on every term of
/// depth ≤ 3 in `x` and depth ≤ 2 in `x, y`, under every assignment.
pub fn ualg_eval_oracle(algebras: &[&FiniteAlgebra]) -> Outcome {
    let mut cases = 0;
    let mut stack = Vec::new();
    let signatures: Vec<&Signature> = algebras.iter().map(|a| a.signature()).unique().collect();
    for sig in signatures {
        let members: Vec<&&FiniteAlgebra> = algebras.iter().filter(|a| a.signature() == sig).collect();
        for (slots, depth) in [(&[Var::X][..], 3), (&[Var::X, Var::Y][..], 2)] {
            for t in terms_up_to_depth(sig, slots, depth) {
                let compiled = CompiledTerm::new(&t, sig, slots).map_err(err)?;
                for a in &members {
                    let expected = reference_table(a, &t, slots);
                    let mut values = vec![0; slots.len()];
                    for (code, &want) in expected.iter().enumerate() {
                        let mut rest = code;
                        for v in values.iter_mut().rev() {
                            *v = rest % a.size();
                            rest /= a.size();
                        }
                        let got = compiled.eval(a, &values, &mut stack);
                        ensure(got == want, || format!("{}: {t} at {values:?}: {got} vs {want}", a.name()))?;
                        cases += 1;
                    }
                }
            }
        }
    }
    Ok(cases)
}

/// Quotient projections by every congruence satisfy the homomorphism law.
pub fn ualg_quotient_hom_law(algebras: &[&FiniteAlgebra]) -> Outcome {
    let mut cases = 0;
    for a in algebras {
        for c in all_congruences(a).map_err(err)? {
            let (q, proj) = quotient_algebra(a, &c).map_err(err)?;
            if let Check::Fails(w) = check_hom_law(a, &q, proj.map()).map_err(err)? {
                return Err(format!("{} / {:?}: {w}", a.name(), c.blocks()));
            }
            cases += 1;
        }
    }
    Ok(cases)
}

/// `decode(encode(t)) = t` for products of up to 4 factors of size ≤ 3.
pub fn ualg_codec_round_trip() -> Outcome {
    let mut cases = 0;
    for radices in size_tuples(4, &[1, 2, 3]) {
        let codec = TupleCodec::new(radices.clone());
        for t in radices.iter().map(|&r| 0..r).multi_cartesian_product() {
            let index = codec.encode(&t);
            ensure(codec.decode(index) == t, || format!("radices {radices:?}: {t:?} ↦ {index}"))?;
            cases += 1;
        }
        ensure(cases > 0, || "empty codec sweep".into())?;
    }
    Ok(cases)
}

/// `t = t` is an identity for every term of depth ≤ 2 in `x, y`.
pub fn ualg_identity_reflexive(algebras: &[&FiniteAlgebra]) -> Outcome {
    let mut cases = 0;
    for a in algebras {
        for t in terms_up_to_depth(a.signature(), &[Var::X, Var::Y], 2) {
            ensure(is_identity(a, &t, &t).map_err(err)?.holds(), || format!("{}: {t} = {t}", a.name()))?;
            cases += 1;
        }
    }
    Ok(cases)
}

// ---- redprod ----

/// `detected_filter` yields a filter for maps into small sets: every map
/// when the product has at most 12 elements, `samples` seeded random maps
/// otherwise.
pub fn redprod_detected_is_filter(max_index: usize, sizes: &[usize], samples: usize, seed: u64) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut cases = 0;
    for tuple in size_tuples(max_index, sizes) {
        let family = carrier_family(&tuple);
        let n = family.carrier_size();
        let maps: Vec<Vec<usize>> = if n <= 12 {
            (0u32..1 << n).map(|bits| (0..n).map(|a| (bits >> a & 1) as usize).collect()).collect()
        } else {
            (0..samples).map(|_| (0..n).map(|_| rng.gen_range(0..4)).collect()).collect()
        };
        for h in maps {
            detected_filter(&h, &family).map_err(|e| format!("sizes {tuple:?}, map {h:?}: {e}"))?;
            cases += 1;
        }
    }
    Ok(cases)
}

/// The canonical map of `∏ A_i / f` detects exactly `f`.
pub fn redprod_converse(max_index: usize, sizes: &[usize]) -> Outcome {
    let mut cases = 0;
    for tuple in size_tuples(max_index, sizes) {
        let family = carrier_family(&tuple);
        for f in filters_on(tuple.len()) {
            let rp = reduced_product(&family, &f).map_err(err)?;
            let detected = detected_filter(rp.canonical().map(), &family).map_err(err)?;
            ensure(detected == f, || {
                format!("sizes {tuple:?}: base {:?} detected as {:?}", f.base().elements(), detected.base().elements())
            })?;
            cases += 1;
        }
    }
    Ok(cases)
}

fn sum_map(family: &ProductFamily, n: usize, coeffs: &[usize]) -> Vec<usize> {
    (0..family.carrier_size())
        .map(|a| coeffs.iter().enumerate().map(|(i, c)| c * family.coord(a, i)).sum::<usize>() % n)
        .collect()
}

/// Homomorphisms out of a product of groups: canonical maps of every reduced
/// product, their composites with every quotient, and for powers of `Z_n`
/// every sum map `a ↦ Σ c_i a_i`.
pub fn group_hom_corpus(family: &ProductFamily) -> Result<Vec<HomTable>, String> {
    let domain = family.product().map_err(err)?;
    let mut homs = Vec::new();
    for f in filters_on(family.len()) {
        let rp = reduced_product(family, &f).map_err(err)?;
        if rp.algebra().size() <= 8 {
            for c in all_congruences(rp.algebra()).map_err(err)? {
                let (_, proj) = quotient_algebra(rp.algebra(), &c).map_err(err)?;
                homs.push(rp.canonical().then(&proj).map_err(err)?);
            }
        } else {
            homs.push(rp.canonical().clone());
        }
    }
    let first = &family.factors()[0];
    let cyclic = family.factors().iter().all(|a| a == first) && *first == corpus::cyclic_group(first.size());
    if cyclic {
        let n = first.size();
        for coeffs in (0..family.len()).map(|_| 0..n).multi_cartesian_product() {
            let map = sum_map(family, n, &coeffs);
            homs.push(HomTable::new(domain.clone(), first.clone(), map).map_err(err)?);
        }
    }
    Ok(homs)
}

fn group_families(groups: &[&FiniteAlgebra], max_len: usize, max_carrier: usize) -> Vec<ProductFamily> {
    (1..=max_len)
        .flat_map(|k| (0..k).map(|_| groups.iter()).multi_cartesian_product())
        .map(|fs| ProductFamily::new(fs.into_iter().map(|a| (*a).clone()).collect()).expect("group family"))
        .filter(|f| f.carrier_size() <= max_carrier)
        .collect()
}

/// `kernel_filter = detected_filter` for homomorphisms on group products.
pub fn redprod_kernel_equals_detected(groups: &[&FiniteAlgebra], max_index: usize) -> Outcome {
    let mut cases = 0;
    for family in group_families(groups, max_index.min(3), 64) {
        for h in group_hom_corpus(&family)? {
            let k = kernel_filter(&h, &family).map_err(err)?;
            let d = detected_filter(h.map(), &family).map_err(err)?;
            ensure(k == d, || {
                format!("{} → {}: kernel {:?}, detected {:?}", h.domain().name(), h.codomain().name(), k.base().elements(), d.base().elements())
            })?;
            cases += 1;
        }
    }
    Ok(cases)
}

/// Factorizations reproduce `h` and use `least_bdd_n` ultrafilters.
pub fn redprod_factorization(groups: &[&FiniteAlgebra], max_index: usize) -> Outcome {
    let mut cases = 0;
    for family in group_families(groups, max_index.min(3), 64) {
        for h in group_hom_corpus(&family)? {
            let fz = factor_homomorphism(&h, &family).map_err(err)?;
            if let Some(a) = (0..family.carrier_size()).find(|&a| fz.composite(a) != h.apply(a)) {
                return Err(format!("{} → {}: composite differs at {a}", h.domain().name(), h.codomain().name()));
            }
            let least = least_bdd_n(&detected_filter(h.map(), &family).map_err(err)?);
            ensure(fz.ultrafilters().len() == least, || {
                format!("{} → {}: {} ultrafilters, least_bdd_n {least}", h.domain().name(), h.codomain().name(), fz.ultrafilters().len())
            })?;
            cases += 1;
        }
    }
    Ok(cases)
}

/// `A → ∏ A/U` is onto and `A/∩U → ∏ A/U` is bijective for every nonempty
/// set of distinct ultrafilters.
pub fn redprod_surjectivity(max_index: usize, sizes: &[usize]) -> Outcome {
    let mut cases = 0;
    for tuple in size_tuples(max_index, sizes) {
        let family = carrier_family(&tuple);
        let p = family.index_set();
        for set in p.power_set().filter(|s| !s.is_empty()) {
            let ultras: Vec<Ultrafilter> = set.elements().iter().map(|&i| Ultrafilter::new(p, i).expect("point")).collect();
            let report = verify_surjectivity(&family, &ultras).map_err(err)?;
            ensure(report.holds(), || format!("sizes {tuple:?}, points {:?}: {report:?}", set.elements()))?;
            cases += 1;
        }
    }
    Ok(cases)
}

/// An ultrapower by a principal ultrafilter has the size of its factor.
pub fn redprod_ultrapower_size(algebras: &[&FiniteAlgebra], max_index: usize) -> Outcome {
    let mut cases = 0;
    for a in algebras {
        for n in 1..=max_index {
            let family = ProductFamily::power(a, n).map_err(err)?;
            for i in 0..n {
                let u = Ultrafilter::new(family.index_set(), i).map_err(err)?;
                let rp = reduced_product(&family, &u.as_filter()).map_err(err)?;
                ensure(rp.class_count() == a.size(), || format!("{}^{n}/U_{i} has {} classes", a.name(), rp.class_count()))?;
                cases += 1;
            }
        }
    }
    Ok(cases)
}

/// The diagonal map into `A^I / f` is injective for proper `f`.
pub fn redprod_diagonal_injective(algebras: &[&FiniteAlgebra], max_index: usize) -> Outcome {
    let mut cases = 0;
    for a in algebras {
        for n in 1..=max_index {
            let family = ProductFamily::power(a, n).map_err(err)?;
            for f in filters_on(n).into_iter().filter(Filter::is_proper) {
                let rp = reduced_product(&family, &f).map_err(err)?;
                let images: BTreeSet<usize> = (0..a.size()).map(|x| rp.class_of(family.codec().encode(&vec![x; n]))).collect();
                ensure(images.len() == a.size(), || format!("{}^{n} / base {:?}: diagonal not injective", a.name(), f.base().elements()))?;
                cases += 1;
            }
        }
    }
    Ok(cases)
}

// ---- relcheck ----

fn relations_for(a: &FiniteAlgebra) -> Vec<FormalRelation> {
    if *a.signature() == corpus::ring_signature() {
        ring_relations_two_sided()
    } else {
        catalog_for(a).unwrap_or_default()
    }
}

/// Every catalog relation satisfies the substitution condition.
pub fn relcheck_dr_catalog(algebras: &[&FiniteAlgebra]) -> Outcome {
    let mut cases = 0;
    for a in algebras {
        for r in relations_for(a) {
            if let Check::Fails(w) = check_dr(a, &r).map_err(err)? {
                return Err(format!("{}: {r}: {w}", a.name()));
            }
            cases += 1;
        }
    }
    Ok(cases)
}

/// A relation satisfying the substitution condition on two factors holds on
/// their product whenever `a, a'` agree in one factor and `b, b'` in the other.
pub fn relcheck_r_prod(algebras: &[&FiniteAlgebra]) -> Outcome {
    let mut cases = 0;
    let small: Vec<&&FiniteAlgebra> = algebras.iter().filter(|a| a.size() <= 4).collect();
    for (a0, a1) in small.iter().cartesian_product(&small) {
        if a0.signature() != a1.signature() {
            continue;
        }
        for r in relations_for(a0) {
            if !check_dr(a0, &r).map_err(err)?.holds() || !check_dr(a1, &r).map_err(err)?.holds() {
                continue;
            }
            if let Check::Fails(w) = check_r_prod(a0, a1, &r).map_err(err)? {
                return Err(format!("{} × {}: {r}: {w:?}", a0.name(), a1.name()));
            }
            cases += 1;
        }
    }
    Ok(cases)
}

fn congruence_perps(a: &FiniteAlgebra) -> Result<Vec<(BinaryRelation, BinaryRelation)>, String> {
    let rels = relations_for(a);
    all_congruences(a)
        .map_err(err)?
        .iter()
        .map(|c| {
            let c = BinaryRelation::from_congruence(c);
            let perp = compute_perp(a, &rels, &c).map_err(err)?;
            Ok((c, perp))
        })
        .collect()
}

/// Perps of congruences are reflexive and symmetric; for rings and groups
/// they are also closed under the operations of `A × A`.
pub fn relcheck_perp_properties(algebras: &[&FiniteAlgebra]) -> Outcome {
    let mut cases = 0;
    for a in algebras {
        let closed = flavor_of(a).is_some();
        let rels = relations_for(a);
        for c in all_congruences(a).map_err(err)? {
            let report = perp_report(a, &rels, &BinaryRelation::from_congruence(&c), closed)
                .map_err(|e| format!("{} with c = {:?}: {e}", a.name(), c.blocks()))?;
            if let Check::Fails((x, y)) = report.symmetric {
                return Err(format!("{} with c = {:?}: ({x},{y}) without ({y},{x})", a.name(), c.blocks()));
            }
            cases += 1;
        }
    }
    Ok(cases)
}

/// `c ⊆ c'` implies `perp(c') ⊆ perp(c)` over all congruence pairs.
pub fn relcheck_perp_monotone(algebras: &[&FiniteAlgebra]) -> Outcome {
    let mut cases = 0;
    for a in algebras {
        let perps = congruence_perps(a)?;
        for ((c, pc), (d, pd)) in perps.iter().cartesian_product(&perps) {
            if c.is_subset_of(d) {
                ensure(pd.is_subset_of(pc), || format!("{}: {:?} ⊆ {:?} but perps are not reversed", a.name(), c.pairs(), d.pairs()))?;
                cases += 1;
            }
        }
    }
    Ok(cases)
}

/// The almost-direct-factor facts hold on every ring and group.
pub fn relcheck_almost_facts(algebras: &[&FiniteAlgebra]) -> Outcome {
    let mut cases = 0;
    for a in algebras {
        let Some(flavor) = flavor_of(a) else { continue };
        let report = verify_almost_facts(a, flavor).map_err(err)?;
        if let Some(v) = report.violations().next() {
            return Err(format!("{}: {:?} fails on {:?}", a.name(), v.fact, v.subjects.iter().map(ToString::to_string).collect::<Vec<_>>()));
        }
        cases += report.instances.len() as u64;
    }
    Ok(cases)
}

/// Surjections from a product onto one of its factors: projections, and for
/// groups projections followed by inversion (abelian factors) or by
/// conjugation with each element.
pub fn projection_corpus(family: &ProductFamily, flavor: Flavor) -> Result<Vec<HomTable>, String> {
    let domain = family.product().map_err(err)?;
    let mut homs = Vec::new();
    for (i, b) in family.factors().iter().enumerate() {
        let proj: Vec<usize> = (0..family.carrier_size()).map(|a| family.coord(a, i)).collect();
        let mut twists: Vec<Vec<usize>> = vec![identity_map(b.size())];
        if flavor == Flavor::Group {
            let mul = b.op_index("mul").map_err(err)?;
            let inv = b.op_index("inv").map_err(err)?;
            let abelian = (0..b.size()).all(|x| (0..b.size()).all(|y| b.apply2(mul, x, y) == b.apply2(mul, y, x)));
            if abelian {
                twists.push((0..b.size()).map(|x| b.apply(inv, &[x])).collect());
            }
            for g in 1..b.size() {
                let gi = b.apply(inv, &[g]);
                twists.push((0..b.size()).map(|x| b.apply2(mul, b.apply2(mul, g, x), gi)).collect());
            }
        }
        for t in twists {
            let map = proj.iter().map(|&x| t[x]).collect();
            homs.push(HomTable::new(domain.clone(), b.clone(), map).map_err(err)?);
        }
    }
    Ok(homs)
}

fn cc_families(algebras: &[&FiniteAlgebra], max_index: usize) -> Vec<(ProductFamily, Flavor)> {
    let mut out = Vec::new();
    for flavor in [Flavor::Group, Flavor::Ring] {
        let members: Vec<&FiniteAlgebra> = algebras.iter().copied().filter(|a| flavor_of(a) == Some(flavor) && a.size() > 1).collect();
        for k in 1..=max_index.min(2) {
            for fs in (0..k).map(|_| members.iter()).multi_cartesian_product() {
                let family = ProductFamily::new(fs.into_iter().map(|a| (*a).clone()).collect()).expect("family");
                if family.carrier_size() <= 64 {
                    out.push((family, flavor));
                }
            }
        }
    }
    out
}

/// The factorization of `A → B → B/Z(B)` reproduces the composite.
pub fn relcheck_cc_composite(algebras: &[&FiniteAlgebra], max_index: usize) -> Outcome {
    let mut cases = 0;
    for (family, flavor) in cc_families(algebras, max_index) {
        for f in projection_corpus(&family, flavor)? {
            let cc = cc_factorization_demo(&f, &family, flavor).map_err(err)?;
            ensure(cc.composite_matches(), || format!("{} → {}: composite differs", f.domain().name(), f.codomain().name()))?;
            cases += 1;
        }
    }
    Ok(cases)
}

/// Steps of the chain whose block survives modulo the center are strict.
pub fn relcheck_chain(algebras: &[&FiniteAlgebra], max_index: usize) -> Outcome {
    let mut cases = 0;
    for (family, flavor) in cc_families(algebras, max_index) {
        let forward: Vec<Vec<usize>> = (0..family.len()).map(|i| vec![i]).collect();
        let backward: Vec<Vec<usize>> = forward.iter().rev().cloned().collect();
        for f in projection_corpus(&family, flavor)? {
            for parts in [&forward, &backward] {
                let report = chain_strictness(&f, &family, parts, flavor).map_err(err)?;
                ensure(report.holds(), || format!("{} → {} with parts {parts:?}: {:?}", f.domain().name(), f.codomain().name(), report.steps))?;
                cases += 1;
            }
        }
    }
    Ok(cases)
}

// ---- eklab ----

/// The least prime above the greedy bound for size `m`.
pub fn greedy_prime(m: usize) -> u64 {
    (eklab::prime_bound(m) + 1..).find(|&p| is_prime(p)).expect("primes are unbounded")
}

/// Built matrices pass the independent minor check.
pub fn eklab_build_verifies(max_matrix: usize) -> Outcome {
    let mut cases = 0;
    for m in 1..=max_matrix {
        let fields = [ExactField::Rational, ExactField::prime(greedy_prime(m)).map_err(err)?];
        for field in fields {
            for order in [ValueOrder::Canonical, ValueOrder::NonNegative] {
                let (x, _) = eklab::construct_sli(m, field, order).map_err(err)?;
                if let Check::Fails(w) = eklab::verify_sli(&x) {
                    return Err(format!("size {m} over {field}: singular minor {w:?}\n{x}"));
                }
                cases += 1;
            }
        }
    }
    Ok(cases)
}

fn ints(v: &[usize]) -> Vec<BigRational> {
    v.iter().map(|&x| BigRational::from_integer(x.into())).collect()
}

/// Cauchy matrices on distinct positive parameters from `1..=6` pass.
pub fn eklab_cauchy(max_len: usize) -> Outcome {
    let mut cases = 0;
    for k in 1..=max_len {
        for a in (1..=6usize).combinations(k) {
            for b in (1..=6usize).combinations(k) {
                let x = eklab::cauchy_oracle(&ints(&a), &ints(&b)).map_err(err)?;
                ensure(eklab::verify_sli(&x).holds(), || format!("Cauchy matrix on {a:?}, {b:?}"))?;
                cases += 1;
            }
        }
    }
    Ok(cases)
}

/// On a verified `m × m` matrix over `F_p`, every nonzero coefficient vector
/// has fewer zero coordinates than nonzero coefficients.
pub fn eklab_zero_count(x: &ExactMatrix, p: u64) -> Outcome {
    let mut cases = 0;
    for coeffs in (0..x.cols()).map(|_| 0..p as usize).multi_cartesian_product() {
        if coeffs.iter().all(|&c| c == 0) {
            continue;
        }
        let z = eklab::zero_count_bound(x, &ints(&coeffs)).map_err(err)?;
        ensure(z.within_bound(), || format!("coefficients {coeffs:?}: {z:?}"))?;
        cases += 1;
    }
    Ok(cases)
}

/// [`eklab_zero_count`] for every `m ≤ max_matrix.min(4)` and `p ≤ 7`.
pub fn eklab_zero_count_all(max_matrix: usize) -> Outcome {
    let mut cases = 0;
    for m in 1..=max_matrix.min(4) {
        for p in [2u64, 3, 5, 7] {
            if let Some(x) = eklab::search_sli(m, p).map_err(err)? {
                ensure(eklab::verify_sli(&x).holds(), || format!("search result for size {m} over F{p} fails"))?;
                cases += eklab_zero_count(&x, p)?;
            }
        }
    }
    Ok(cases)
}

fn det_mod(m: &[Vec<i64>], p: i64) -> i64 {
    if m.len() == 1 {
        return m[0][0].rem_euclid(p);
    }
    (0..m.len())
        .map(|j| {
            let minor: Vec<Vec<i64>> = m[1..].iter().map(|r| r.iter().enumerate().filter(|&(k, _)| k != j).map(|(_, &v)| v).collect()).collect();
            let s = if j % 2 == 0 { 1 } else { -1 };
            s * m[0][j] * det_mod(&minor, p)
        })
        .sum::<i64>()
        .rem_euclid(p)
}

/// `singularizing_value` is the unique root found by trying every corner
/// value: exhaustively for 2×2 frames and for 3×3 frames over `F_2`, `F_3`,
/// and on `samples` seeded 3×3 frames for larger primes up to 11.
pub fn eklab_singularizing_roots(samples: usize, seed: u64) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut cases = 0;
    for p in [2i64, 3, 5, 7, 11] {
        let field = ExactField::prime(p as u64).map_err(err)?;
        for k in [2usize, 3] {
            let free = k * k - 1;
            let frames: Vec<Vec<i64>> = if k == 2 || p <= 3 {
                (0..free).map(|_| 0..p).multi_cartesian_product().collect()
            } else {
                (0..samples).map(|_| (0..free).map(|_| rng.gen_range(0..p)).collect()).collect()
            };
            for prefix in frames {
                let rows = |v: i64| -> Vec<Vec<i64>> {
                    let mut e = prefix.clone();
                    e.push(v);
                    e.chunks(k).map(<[i64]>::to_vec).collect()
                };
                let ul: Vec<Vec<i64>> = rows(0)[..k - 1].iter().map(|r| r[..k - 1].to_vec()).collect();
                if det_mod(&ul, p) == 0 {
                    continue;
                }
                let roots: Vec<i64> = (0..p).filter(|&v| det_mod(&rows(v), p) == 0).collect();
                let entries: Vec<i64> = rows(0).concat();
                let x = ExactMatrix::from_ints(field, k, k, &entries).map_err(err)?;
                let value = eklab::singularizing_value(&x).map_err(err)?;
                ensure(roots.len() == 1 && ints(&[roots[0] as usize])[0] == value, || {
                    format!("{k}×{k} frame {prefix:?} over F{p}: roots {roots:?}, value {value}")
                })?;
                cases += 1;
            }
        }
    }
    Ok(cases)
}

/// `|X^I / f| = |X|^n` agrees with class enumeration.
pub fn eklab_reduced_power(max_index: usize, max_x: usize) -> Outcome {
    let mut cases = 0;
    for n in 1..=max_index {
        for x in 2..=max_x {
            let family = ProductFamily::power(&corpus::cyclic_group(x), n).map_err(err)?;
            for f in filters_on(n) {
                let formula = eklab::reduced_power_cardinality(x, &f).map_err(err)?;
                let classes = reduced_product(&family, &f).map_err(err)?.class_count();
                ensure(formula == classes as u128, || format!("{x}^{n} / base {:?}: {formula} vs {classes}", f.base().elements()))?;
                cases += 1;
            }
        }
    }
    Ok(cases)
}

/// `F_q^I / f` has dimension `|decompose_filter(f)|` and more elements than
/// its dimension.
pub fn eklab_dimension(max_index: usize, fields: &[u64]) -> Outcome {
    let mut cases = 0;
    for &q in fields {
        for n in 1..=max_index {
            for f in filters_on(n) {
                let r = eklab::finite_field_dimension_check(q, &f).map_err(err)?;
                let expected_card = (q as usize).pow(r.dimension as u32);
                ensure(r.holds() && r.cardinality == expected_card, || format!("F{q}, base {:?}: {r:?}", f.base().elements()))?;
                cases += 1;
            }
        }
    }
    Ok(cases)
}

// ---- aggregate ----

fn run(name: &str, body: impl FnOnce() -> Outcome) -> SuiteResult {
    let start = Instant::now();
    let outcome = body();
    let millis = start.elapsed().as_millis() as u64;
    match outcome {
        Ok(cases) => SuiteResult { suite: name.to_string(), cases, passed: true, witness: None, millis },
        Err(w) => SuiteResult { suite: name.to_string(), cases: 0, passed: false, witness: Some(w), millis },
    }
}

/// Runs every invariant suite within `caps`, with `fault` applied to the
/// named corpus algebra first.
pub fn verify_all(caps: &Caps, fault: Option<&Fault>) -> Result<VerifyAllReport, SuiteError> {
    caps.validate()?;
    let mut corpus = Corpus::within(caps.max_size);
    if let Some(fault) = fault {
        corpus.replace(fault)?;
    }
    let all: Vec<&FiniteAlgebra> = corpus.all().collect();
    let groups: Vec<&FiniteAlgebra> = corpus.groups.iter().filter(|g| g.size() <= 4).collect();
    let Caps { max_index, max_size: _, max_matrix } = *caps;
    let sweep = max_index.min(3);
    let suites = vec![
        run("setfam.closure_is_filter", || setfam_closure_is_filter(max_index)),
        run("setfam.decomposition", || setfam_decomposition(max_index)),
        run("setfam.duality", || setfam_duality(max_index)),
        run("ualg.reference_copies", || {
            let pairs: Vec<_> = all.iter().copied().zip(&corpus.references).collect();
            ualg_reference_copies(&pairs)
        }),
        run("ualg.axioms", || ualg_axioms(&all)),
        run("ualg.eval_oracle", || ualg_eval_oracle(&all)),
        run("ualg.quotient_hom_law", || ualg_quotient_hom_law(&all)),
        run("ualg.codec_round_trip", ualg_codec_round_trip),
        run("ualg.identity_reflexive", || ualg_identity_reflexive(&all)),
        run("redprod.detected_is_filter", || redprod_detected_is_filter(sweep, &[2, 3], 200, 0)),
        run("redprod.converse", || redprod_converse(sweep, &[2, 3])),
        run("redprod.kernel_equals_detected", || redprod_kernel_equals_detected(&groups, sweep)),
        run("redprod.surjectivity", || redprod_surjectivity(sweep, &[2, 3])),
        run("redprod.factorization", || redprod_factorization(&groups, sweep)),
        run("redprod.ultrapower_size", || redprod_ultrapower_size(&all, max_index)),
        run("redprod.diagonal_injective", || redprod_diagonal_injective(&all, max_index)),
        run("relcheck.dr_catalog", || relcheck_dr_catalog(&all)),
        run("relcheck.r_prod", || relcheck_r_prod(&all)),
        run("relcheck.perp_properties", || relcheck_perp_properties(&all)),
        run("relcheck.perp_monotone", || relcheck_perp_monotone(&all)),
        run("relcheck.almost_facts", || relcheck_almost_facts(&all)),
        run("relcheck.cc_composite", || relcheck_cc_composite(&all, max_index)),
        run("relcheck.chain", || relcheck_chain(&all, max_index)),
        run("eklab.build_verifies", || eklab_build_verifies(max_matrix)),
        run("eklab.cauchy", || eklab_cauchy(max_matrix.min(5))),
        run("eklab.zero_count", || eklab_zero_count_all(max_matrix)),
        run("eklab.singularizing_roots", || eklab_singularizing_roots(300, 0)),
        run("eklab.reduced_power", || eklab_reduced_power(max_index, 3)),
        run("eklab.dimension", || eklab_dimension(sweep, &[2, 3])),
    ];
    Ok(VerifyAllReport { caps: *caps, fault: fault.cloned(), suites })
}

/// Which checks caught one mutation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FaultCoverage {
    pub fault: Fault,
    pub caught_by: Vec<&'static str>,
    /// The first witness, from the earliest check in `caught_by`.
    pub witness: Option<String>,
}

impl FaultCoverage {
    pub fn caught(&self) -> bool {
        !self.caught_by.is_empty()
    }
}

/// Every single-entry mutation of `a`.
pub fn single_entry_faults(a: &FiniteAlgebra) -> Vec<Fault> {
    let mut out = Vec::new();
    for (op, sym) in a.signature().symbols().iter().enumerate() {
        for (position, &old) in a.table(op).iter().enumerate() {
            for value in (0..a.size()).filter(|&v| v != old) {
                out.push(Fault { algebra: a.name().to_string(), symbol: sym.name.clone(), position, value });
            }
        }
    }
    out
}

/// Applies `fault` to `a` and runs the homomorphism law against a reference
/// copy, the substitution checks of the catalog and the variety axioms.
pub fn fault_coverage(a: &FiniteAlgebra, fault: &Fault) -> Result<FaultCoverage, SuiteError> {
    let mutated = fault.apply(a)?;
    let checks: [(&'static str, Outcome); 3] = [
        ("homomorphism_law", ualg_reference_copies(&[(&mutated, a)])),
        ("dr_check", relcheck_dr_catalog(&[&mutated])),
        ("axioms", ualg_axioms(&[&mutated])),
    ];
    let mut caught_by = Vec::new();
    let mut witness = None;
    for (name, outcome) in checks {
        if let Err(w) = outcome {
            caught_by.push(name);
            witness.get_or_insert(w);
        }
    }
    Ok(FaultCoverage { fault: fault.clone(), caught_by, witness })
}

/// Whether a mutated entry of an SLI matrix is caught by minor verification:
/// every entry is a 1×1 minor, so zeroing any entry must fail.
pub fn matrix_fault_caught(x: &ExactMatrix, row: usize, col: usize) -> Result<bool, String> {
    let mut entries = x.entries().to_vec();
    entries[row * x.cols() + col] = BigRational::from_integer(0.into());
    let mutated = ExactMatrix::new(x.field(), x.rows(), x.cols(), entries).map_err(err)?;
    Ok(!eklab::verify_sli(&mutated).holds())
}
