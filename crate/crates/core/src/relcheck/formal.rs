//! Formal relations `R(x, x'; y, y'; z_0..z_{n-1})`, the substitution
//! condition that makes them detect direct factors, and the perp construction
//! on binary relations.

use std::collections::BTreeMap;
use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{RelError, Result};
use crate::check::Check;
use crate::corpus;
use crate::ualg::{
    all_congruences, is_identity, parse_equation, product_algebra, CompiledTerm, Congruence, Env, FiniteAlgebra,
    Signature, Term, Var, ASSIGNMENT_CAP,
};

/// Largest carrier accepted by [`compute_perp`].
pub const PERP_CARRIER_CAP: usize = 8;
/// Largest number of parameter variables per relation in [`compute_perp`].
pub const PERP_Z_CAP: usize = 2;

/// A term equation in `x, x', y, y'` and parameters `z0..z{n-1}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FormalRelation {
    lhs: Term,
    rhs: Term,
    z_arity: usize,
}

impl FormalRelation {
    pub fn new(lhs: Term, rhs: Term, z_arity: usize) -> Result<Self> {
        for v in lhs.variables().into_iter().chain(rhs.variables()) {
            let ok = match v {
                Var::X | Var::XPrime | Var::Y | Var::YPrime => true,
                Var::Z(k) => (k as usize) < z_arity,
                Var::V(_) => false,
            };
            if !ok {
                return Err(RelError::BadVariable { var: v.to_string(), z_arity });
            }
        }
        Ok(FormalRelation { lhs, rhs, z_arity })
    }

    /// Parses `lhs = rhs`. Without an explicit z-arity, it is one more than
    /// the largest `z` index used.
    pub fn parse(text: &str, sig: &Signature, z_arity: Option<usize>) -> Result<Self> {
        let (lhs, rhs) = parse_equation(text, sig)?;
        let inferred = lhs
            .variables()
            .into_iter()
            .chain(rhs.variables())
            .filter_map(|v| match v {
                Var::Z(k) => Some(k as usize + 1),
                _ => None,
            })
            .max()
            .unwrap_or(0);
        FormalRelation::new(lhs, rhs, z_arity.unwrap_or(inferred))
    }

    pub fn lhs(&self) -> &Term {
        &self.lhs
    }

    pub fn rhs(&self) -> &Term {
        &self.rhs
    }

    pub fn z_arity(&self) -> usize {
        self.z_arity
    }

    /// Variable slots in evaluation order: `x, x', y, y', z0, ..`.
    pub fn slots(&self) -> Vec<Var> {
        let mut slots = vec![Var::X, Var::XPrime, Var::Y, Var::YPrime];
        slots.extend((0..self.z_arity).map(|k| Var::Z(k as u8)));
        slots
    }

    fn compile(&self, sig: &Signature) -> Result<Compiled> {
        let slots = self.slots();
        Ok(Compiled {
            lhs: CompiledTerm::new(&self.lhs, sig, &slots)?,
            rhs: CompiledTerm::new(&self.rhs, sig, &slots)?,
            z_arity: self.z_arity,
        })
    }

    fn substituted(&self, from: Var, to: Var) -> (Term, Term) {
        let subst: BTreeMap<Var, Term> = [(from, Term::var(to))].into_iter().collect();
        (self.lhs.substitute(&subst), self.rhs.substitute(&subst))
    }
}

impl fmt::Display for FormalRelation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} = {}", self.lhs, self.rhs)
    }
}

impl Serialize for FormalRelation {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

/// `{ "signature": ref, "lhs": .., "rhs": .., "z_arity": n }`. The
/// signature reference is resolved by the caller.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RelationDoc {
    pub signature: String,
    pub lhs: String,
    pub rhs: String,
    #[serde(default)]
    pub z_arity: Option<usize>,
}

impl RelationDoc {
    pub fn to_relation(&self, sig: &Signature) -> Result<FormalRelation> {
        FormalRelation::parse(&format!("{} = {}", self.lhs, self.rhs), sig, self.z_arity)
    }
}

struct Compiled {
    lhs: CompiledTerm,
    rhs: CompiledTerm,
    z_arity: usize,
}

impl Compiled {
    /// The first parameter tuple at which the relation fails at
    /// `(x, x', y, y')`, if any.
    fn failing_z(&self, a: &FiniteAlgebra, head: [usize; 4], values: &mut Vec<usize>, stack: &mut Vec<usize>) -> Option<Vec<usize>> {
        let n = a.size();
        values.clear();
        values.extend_from_slice(&head);
        values.resize(4 + self.z_arity, 0);
        for code in 0..n.pow(self.z_arity as u32) {
            let mut rest = code;
            for slot in values[4..].iter_mut() {
                *slot = rest % n;
                rest /= n;
            }
            if self.lhs.eval(a, values, stack) != self.rhs.eval(a, values, stack) {
                return Some(values[4..].to_vec());
            }
        }
        None
    }

    fn holds_for_all_z(&self, a: &FiniteAlgebra, head: [usize; 4], values: &mut Vec<usize>, stack: &mut Vec<usize>) -> bool {
        self.failing_z(a, head, values, stack).is_none()
    }
}

fn catalog(sig: Signature, texts: &[&str]) -> Vec<FormalRelation> {
    texts
        .iter()
        .map(|t| FormalRelation::parse(t, &sig, None).expect("catalog relations parse"))
        .collect()
}

/// `(x−x')(y−y') = 0` and `((x−x')z)(y−y') = 0`.
pub fn ring_relations() -> Vec<FormalRelation> {
    catalog(
        corpus::ring_signature(),
        &[
            "mul(add(x,neg(x')),add(y,neg(y'))) = zero",
            "mul(mul(add(x,neg(x')),z0),add(y,neg(y'))) = zero",
        ],
    )
}

/// The ring relations together with their mirror images, which makes the
/// perp of a congruence closed under the ring operations.
pub fn ring_relations_two_sided() -> Vec<FormalRelation> {
    let mut rels = ring_relations();
    rels.extend(catalog(
        corpus::ring_signature(),
        &[
            "mul(add(y,neg(y')),add(x,neg(x'))) = zero",
            "mul(add(y,neg(y')),mul(z0,add(x,neg(x')))) = zero",
        ],
    ));
    rels
}

/// `[xx'^{-1}, yy'^{-1}] = e` and `[x²x'^{-2}, (yy'^{-1})³] = e`, with
/// `[a, b] = a^{-1}b^{-1}ab`.
pub fn group_relations() -> Vec<FormalRelation> {
    let comm = |a: &str, b: &str| format!("mul(mul(inv({a}),inv({b})),mul({a},{b})) = e");
    let d = "mul(y,inv(y'))";
    catalog(
        corpus::group_signature(),
        &[
            &comm("mul(x,inv(x'))", d),
            &comm("mul(mul(x,x),inv(mul(x',x')))", &format!("mul(mul({d},{d}),{d})")),
        ],
    )
}

/// `(x∨y)∧(x'∨y') = (x∨y')∧(x'∨y)`.
pub fn lattice_relations() -> Vec<FormalRelation> {
    catalog(
        corpus::lattice_signature(),
        &["meet(join(x,y),join(x',y')) = meet(join(x,y'),join(x',y))"],
    )
}

/// The built-in relations whose signature matches `a`.
pub fn catalog_for(a: &FiniteAlgebra) -> Option<Vec<FormalRelation>> {
    let sig = a.signature();
    if *sig == corpus::ring_signature() {
        Some(ring_relations())
    } else if *sig == corpus::group_signature() {
        Some(group_relations())
    } else if *sig == corpus::lattice_signature() {
        Some(lattice_relations())
    } else {
        None
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum DrCase {
    /// `R(x, x, y, y')`.
    #[serde(rename = "x'=x")]
    XEqual,
    /// `R(x, x', y, y)`.
    #[serde(rename = "y'=y")]
    YEqual,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DrWitness {
    pub case: DrCase,
    pub assignment: Env,
}

impl fmt::Display for DrWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let case = match self.case {
            DrCase::XEqual => "x'=x",
            DrCase::YEqual => "y'=y",
        };
        let env: Vec<String> = self.assignment.iter().map(|(v, x)| format!("{v}={x}")).collect();
        write!(f, "with {case}, fails at {}", env.join(", "))
    }
}

/// Whether `R(x,x,y,y')` and `R(x,x',y,y)` are both identities of `a`.
pub fn check_dr(a: &FiniteAlgebra, r: &FormalRelation) -> Result<Check<DrWitness>> {
    for (case, from, to) in [(DrCase::XEqual, Var::XPrime, Var::X), (DrCase::YEqual, Var::YPrime, Var::Y)] {
        let (lhs, rhs) = r.substituted(from, to);
        if let Check::Fails(assignment) = is_identity(a, &lhs, &rhs)? {
            return Ok(Check::Fails(DrWitness { case, assignment }));
        }
    }
    Ok(Check::Holds)
}

/// Elements of `A_0 × A_1` (flat indices) at which the relation fails.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RProdWitness {
    pub a: usize,
    pub a_prime: usize,
    pub b: usize,
    pub b_prime: usize,
    pub z: Vec<usize>,
}

/// On `A_0 × A_1`, checks `R(a, a', b, b', c..)` whenever `a, a'` agree in
/// the first component and `b, b'` agree in the second.
pub fn check_r_prod(a0: &FiniteAlgebra, a1: &FiniteAlgebra, r: &FormalRelation) -> Result<Check<RProdWitness>> {
    for (index, factor) in [a0, a1].into_iter().enumerate() {
        if let Check::Fails(w) = check_dr(factor, r)? {
            return Err(RelError::RelationFailsDr { index, witness: format!("in {}: {w}", factor.name()) });
        }
    }
    let (p, codec) = product_algebra(a0.signature(), &[a0.clone(), a1.clone()])?;
    let (n, n0, n1) = (p.size() as f64, a0.size() as f64, a1.size() as f64);
    let total = n * n1 * n * n0 * n.powi(r.z_arity as i32);
    if total > ASSIGNMENT_CAP as f64 {
        return Err(RelError::TooLarge { what: "product relation sweep", size: total as u64, cap: ASSIGNMENT_CAP });
    }
    let compiled = r.compile(p.signature())?;
    let found = (0..p.size()).into_par_iter().find_map_first(|a| {
        let mut values = Vec::new();
        let mut stack = Vec::new();
        for c1 in 0..a1.size() {
            let a_prime = codec.encode(&[codec.coord(a, 0), c1]);
            for b in 0..p.size() {
                for c0 in 0..a0.size() {
                    let b_prime = codec.encode(&[c0, codec.coord(b, 1)]);
                    if let Some(z) = compiled.failing_z(&p, [a, a_prime, b, b_prime], &mut values, &mut stack) {
                        return Some(RProdWitness { a, a_prime, b, b_prime, z });
                    }
                }
            }
        }
        None
    });
    Ok(Check::from(found))
}

/// A binary relation on a finite carrier.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BinaryRelation {
    size: usize,
    bits: Vec<bool>,
}

/// A pair of related tuples whose image under an operation is unrelated.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SubalgebraWitness {
    pub symbol: String,
    pub left: Vec<usize>,
    pub right: Vec<usize>,
}

impl BinaryRelation {
    pub fn new(size: usize, pairs: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut bits = vec![false; size * size];
        for (a, b) in pairs {
            if a >= size || b >= size {
                return Err(crate::ualg::UalgError::ElementOutOfRange { element: a.max(b), size }.into());
            }
            bits[a * size + b] = true;
        }
        Ok(BinaryRelation { size, bits })
    }

    fn from_fn(size: usize, f: impl Fn(usize, usize) -> bool) -> Self {
        BinaryRelation { size, bits: (0..size * size).map(|i| f(i / size, i % size)).collect() }
    }

    pub fn diagonal(size: usize) -> Self {
        Self::from_fn(size, |a, b| a == b)
    }

    pub fn full(size: usize) -> Self {
        Self::from_fn(size, |_, _| true)
    }

    pub fn from_congruence(c: &Congruence) -> Self {
        Self::from_fn(c.size(), |a, b| c.related(a, b))
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn contains(&self, a: usize, b: usize) -> bool {
        self.bits[a * self.size + b]
    }

    pub fn pairs(&self) -> Vec<(usize, usize)> {
        (0..self.bits.len()).filter(|&i| self.bits[i]).map(|i| (i / self.size, i % self.size)).collect()
    }

    pub fn len(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn is_subset_of(&self, other: &BinaryRelation) -> bool {
        self.size == other.size && self.bits.iter().zip(&other.bits).all(|(&a, &b)| !a || b)
    }

    pub fn is_reflexive(&self) -> Check<usize> {
        Check::from((0..self.size).find(|&a| !self.contains(a, a)))
    }

    pub fn is_symmetric(&self) -> Check<(usize, usize)> {
        Check::from(self.pairs().into_iter().find(|&(a, b)| !self.contains(b, a)))
    }

    /// On failure, `(a, b, c)` with `a~b`, `b~c` but not `a~c`.
    pub fn is_transitive(&self) -> Check<(usize, usize, usize)> {
        for (a, b) in self.pairs() {
            if let Some(c) = (0..self.size).find(|&c| self.contains(b, c) && !self.contains(a, c)) {
                return Check::Fails((a, b, c));
            }
        }
        Check::Holds
    }

    /// Whether the relation is a subalgebra of `A × A`.
    pub fn is_subalgebra(&self, a: &FiniteAlgebra) -> Check<SubalgebraWitness> {
        let pairs = self.pairs();
        for (op, sym) in a.signature().symbols().iter().enumerate() {
            let k = sym.arity;
            let total = pairs.len().pow(k as u32);
            let mut left = vec![0; k];
            let mut right = vec![0; k];
            for code in 0..total {
                let mut rest = code;
                for j in 0..k {
                    let (l, r) = pairs[rest % pairs.len()];
                    left[j] = l;
                    right[j] = r;
                    rest /= pairs.len();
                }
                if !self.contains(a.apply(op, &left), a.apply(op, &right)) {
                    return Check::Fails(SubalgebraWitness { symbol: sym.name.clone(), left, right });
                }
            }
        }
        Check::Holds
    }

    /// The relation as a congruence of `a`, if it is one.
    pub fn as_congruence(&self, a: &FiniteAlgebra) -> Option<Congruence> {
        if !(self.is_reflexive().holds() && self.is_symmetric().holds() && self.is_transitive().holds()) {
            return None;
        }
        let labels: Vec<usize> = (0..self.size).map(|x| (0..self.size).find(|&y| self.contains(x, y)).unwrap()).collect();
        let c = Congruence::from_labels(&labels);
        c.is_compatible(a).holds().then_some(c)
    }
}

impl Serialize for BinaryRelation {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.pairs().serialize(serializer)
    }
}

/// `C^⊥`: pairs `(a, a')` such that every relation holds at
/// `(a, a', b, b', c..)` for all `(b, b') ∈ C` and all parameters.
pub fn compute_perp(a: &FiniteAlgebra, relations: &[FormalRelation], c: &BinaryRelation) -> Result<BinaryRelation> {
    if a.size() > PERP_CARRIER_CAP {
        return Err(RelError::TooLarge { what: "carrier", size: a.size() as u64, cap: PERP_CARRIER_CAP as u64 });
    }
    if c.size() != a.size() {
        return Err(RelError::SizeMismatch { expected: a.size(), found: c.size() });
    }
    let mut compiled = Vec::with_capacity(relations.len());
    for (index, r) in relations.iter().enumerate() {
        if r.z_arity > PERP_Z_CAP {
            return Err(RelError::TooLarge { what: "relation z-arity", size: r.z_arity as u64, cap: PERP_Z_CAP as u64 });
        }
        if let Check::Fails(w) = check_dr(a, r)? {
            return Err(RelError::RelationFailsDr { index, witness: w.to_string() });
        }
        compiled.push(r.compile(a.signature())?);
    }
    let n = a.size();
    let c_pairs = c.pairs();
    let bits: Vec<bool> = (0..n * n)
        .into_par_iter()
        .map(|i| {
            let (x, x_prime) = (i / n, i % n);
            let mut values = Vec::new();
            let mut stack = Vec::new();
            compiled.iter().all(|r| {
                c_pairs
                    .iter()
                    .all(|&(y, y_prime)| r.holds_for_all_z(a, [x, x_prime, y, y_prime], &mut values, &mut stack))
            })
        })
        .collect();
    Ok(BinaryRelation { size: n, bits })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PerpReport {
    pub perp: BinaryRelation,
    pub reflexive: Check<usize>,
    pub symmetric: Check<(usize, usize)>,
    pub subalgebra: Check<SubalgebraWitness>,
    pub transitive: Check<(usize, usize, usize)>,
    pub congruence: bool,
    pub input_is_congruence: bool,
    /// Properties that were required to hold rather than only reported.
    pub asserted: Vec<&'static str>,
}

/// Computes `C^⊥` and its properties. Reflexivity is always required.
/// Symmetry and closure under the operations are required only when
/// `closed_set` declares the relation list closed enough to force them;
/// transitivity is only reported.
pub fn perp_report(
    a: &FiniteAlgebra,
    relations: &[FormalRelation],
    c: &BinaryRelation,
    closed_set: bool,
) -> Result<PerpReport> {
    let perp = compute_perp(a, relations, c)?;
    let reflexive = perp.is_reflexive();
    let symmetric = perp.is_symmetric();
    let subalgebra = perp.is_subalgebra(a);
    let mut asserted = vec!["reflexive"];
    if let Check::Fails(x) = reflexive {
        return Err(RelError::PropertyFailed { property: "reflexive", witness: format!("({x},{x}) missing") });
    }
    if closed_set {
        asserted.extend(["symmetric", "subalgebra"]);
        if let Check::Fails((x, y)) = symmetric {
            return Err(RelError::PropertyFailed { property: "symmetric", witness: format!("({x},{y}) without ({y},{x})") });
        }
        if let Check::Fails(w) = &subalgebra {
            return Err(RelError::PropertyFailed {
                property: "a subalgebra",
                witness: format!("{} on {:?} and {:?}", w.symbol, w.left, w.right),
            });
        }
    }
    Ok(PerpReport {
        congruence: perp.as_congruence(a).is_some(),
        input_is_congruence: c.as_congruence(a).is_some(),
        transitive: perp.is_transitive(),
        perp,
        reflexive,
        symmetric,
        subalgebra,
        asserted,
    })
}

/// A congruence whose perp is not transitive.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TransitivityArtifact {
    pub algebra: String,
    pub congruence: Vec<Vec<usize>>,
    pub perp: BinaryRelation,
    pub witness: (usize, usize, usize),
}

/// Searches every congruence of every given algebra for a non-transitive
/// perp, using the built-in catalog for the algebra's signature.
pub fn transitivity_search(algebras: &[FiniteAlgebra]) -> Result<Vec<TransitivityArtifact>> {
    let mut found = Vec::new();
    for a in algebras {
        let Some(rels) = catalog_for(a) else { continue };
        for c in all_congruences(a)? {
            let perp = compute_perp(a, &rels, &BinaryRelation::from_congruence(&c))?;
            if let Check::Fails(witness) = perp.is_transitive() {
                found.push(TransitivityArtifact { algebra: a.name().to_string(), congruence: c.blocks(), perp, witness });
            }
        }
    }
    Ok(found)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::relcheck::center_or_centralizer;

    #[test]
    fn catalog_relations_satisfy_dr() {
        for r in ring_relations_two_sided() {
            for a in [corpus::field_ring(2), corpus::field_ring(3), corpus::upper_triangular_f2()] {
                assert!(check_dr(&a, &r).unwrap().holds(), "{r} on {}", a.name());
            }
        }
        for r in group_relations() {
            for a in [corpus::symmetric_group(3), corpus::cyclic_group(4)] {
                assert!(check_dr(&a, &r).unwrap().holds(), "{r} on {}", a.name());
            }
        }
        for a in [corpus::chain_lattice(2), corpus::chain_lattice(4), corpus::boolean_lattice(2)] {
            assert!(check_dr(&a, &lattice_relations()[0]).unwrap().holds());
        }
    }

    #[test]
    fn non_relation_is_rejected() {
        let sig = corpus::ring_signature();
        let r = FormalRelation::parse("mul(x,y) = zero", &sig, None).unwrap();
        let w = check_dr(&corpus::field_ring(2), &r).unwrap().into_witness().unwrap();
        assert_eq!(w.case, DrCase::XEqual);
        assert!(matches!(
            FormalRelation::parse("mul(x,z1) = zero", &sig, Some(1)),
            Err(RelError::BadVariable { .. })
        ));
        assert!(matches!(FormalRelation::parse("mul(x,v0) = zero", &sig, None), Err(RelError::BadVariable { .. })));
        assert_eq!(FormalRelation::parse("mul(x,z1) = zero", &sig, None).unwrap().z_arity(), 2);
    }

    #[test]
    fn product_property_examples() {
        let f2 = corpus::field_ring(2);
        assert!(check_r_prod(&f2, &f2, &ring_relations()[0]).unwrap().holds());
        let z2 = corpus::cyclic_group(2);
        assert!(check_r_prod(&z2, &z2, &group_relations()[0]).unwrap().holds());
        let one = corpus::cyclic_group(1);
        assert!(check_r_prod(&one, &corpus::symmetric_group(3), &group_relations()[0]).unwrap().holds());
    }

    #[test]
    fn perp_examples() {
        let s3 = corpus::symmetric_group(3);
        let g1 = &group_relations()[..1];
        let diag = compute_perp(&s3, g1, &BinaryRelation::diagonal(6)).unwrap();
        assert_eq!(diag, BinaryRelation::full(6));
        let perp = compute_perp(&s3, g1, &BinaryRelation::full(6)).unwrap();
        let z = center_or_centralizer(&s3, None).unwrap();
        let (mul, inv) = (s3.op_index("mul").unwrap(), s3.op_index("inv").unwrap());
        for a in 0..6 {
            for b in 0..6 {
                let q = s3.apply2(mul, a, s3.apply(inv, &[b]));
                assert_eq!(perp.contains(a, b), z.contains(q));
            }
        }
        assert_eq!(perp, BinaryRelation::diagonal(6));
        let z4 = corpus::cyclic_group(4);
        assert_eq!(compute_perp(&z4, g1, &BinaryRelation::full(4)).unwrap(), BinaryRelation::full(4));
    }

    #[test]
    fn perp_report_examples() {
        let s3 = corpus::symmetric_group(3);
        let r = perp_report(&s3, &group_relations()[..1], &BinaryRelation::full(6), true).unwrap();
        assert!(r.transitive.holds() && r.congruence);
        let c2 = corpus::chain_lattice(2);
        let r = perp_report(&c2, &lattice_relations(), &BinaryRelation::diagonal(2), false).unwrap();
        assert!(r.reflexive.holds() && r.symmetric.holds() && r.subalgebra.holds() && r.transitive.holds());
        assert_eq!(r.asserted, vec!["reflexive"]);
    }

    #[test]
    fn perp_caps() {
        let s4 = corpus::symmetric_group(4);
        assert!(matches!(
            compute_perp(&s4, &group_relations(), &BinaryRelation::diagonal(24)),
            Err(RelError::TooLarge { .. })
        ));
        let sig = corpus::ring_signature();
        let bad = FormalRelation::parse("mul(x,y) = zero", &sig, None).unwrap();
        assert!(matches!(
            compute_perp(&corpus::field_ring(2), &[bad], &BinaryRelation::diagonal(2)),
            Err(RelError::RelationFailsDr { index: 0, .. })
        ));
    }
}
