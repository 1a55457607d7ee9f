//! Annihilators, centers and almost direct factors of finite rings and
//! groups, and formal relations that detect direct product decompositions.

mod formal;

pub use formal::{
    catalog_for, check_dr, check_r_prod, compute_perp, group_relations, lattice_relations, perp_report,
    ring_relations, ring_relations_two_sided, transitivity_search, BinaryRelation, DrCase, DrWitness,
    FormalRelation, PerpReport, RProdWitness, RelationDoc, SubalgebraWitness, TransitivityArtifact, PERP_CARRIER_CAP,
    PERP_Z_CAP,
};

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::redprod::{factor_homomorphism, support, Factorization, ProductFamily, RedprodError};
use crate::ualg::{
    congruence_generated, quotient_algebra, Congruence, FiniteAlgebra, HomTable, ParseError, UalgError,
};

/// Largest carrier for ideal and normal subgroup enumeration.
pub const MAX_STRUCTURE_CARRIER: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RelError {
    #[error(transparent)]
    Ualg(#[from] UalgError),
    #[error(transparent)]
    Redprod(#[from] RedprodError),
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("{flavor} flavor needs the operation {symbol}")]
    MissingOperation { flavor: Flavor, symbol: &'static str },
    #[error("{what} of {size} exceeds the cap {cap}")]
    TooLarge { what: &'static str, size: u64, cap: u64 },
    #[error("variable {var} is not allowed in a relation with z-arity {z_arity}")]
    BadVariable { var: String, z_arity: usize },
    #[error("the map onto {codomain} is not surjective")]
    NotSurjective { codomain: String },
    #[error("parts do not partition the index set: {reason}")]
    NotAPartition { reason: String },
    #[error("elements do not form {what}")]
    NotClosed { what: &'static str },
    #[error("relation {index} fails the substitution check: {witness}")]
    RelationFailsDr { index: usize, witness: String },
    #[error("relation on {found} elements used with an algebra of size {expected}")]
    SizeMismatch { expected: usize, found: usize },
    #[error("perp relation is not {property}: {witness}")]
    PropertyFailed { property: &'static str, witness: String },
}

pub type Result<T> = std::result::Result<T, RelError>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Flavor {
    Ring,
    Group,
}

impl fmt::Display for Flavor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Flavor::Ring => "ring",
            Flavor::Group => "group",
        })
    }
}

/// A ring or group presented by a finite algebra, with the operations the
/// annihilator machinery needs.
#[derive(Debug, Clone)]
struct Structure<'a> {
    a: &'a FiniteAlgebra,
    flavor: Flavor,
    /// `add` for rings, `mul` for groups.
    combine: usize,
    /// `neg` for rings, `inv` for groups.
    invert: usize,
    /// Multiplication (rings only).
    mul: usize,
    neutral: usize,
    full: u64,
}

impl<'a> Structure<'a> {
    fn new(a: &'a FiniteAlgebra, flavor: Flavor) -> Result<Self> {
        if a.size() > MAX_STRUCTURE_CARRIER {
            return Err(RelError::TooLarge {
                what: "carrier",
                size: a.size() as u64,
                cap: MAX_STRUCTURE_CARRIER as u64,
            });
        }
        let op = |symbol: &'static str| a.op_index(symbol).map_err(|_| RelError::MissingOperation { flavor, symbol });
        let (combine, invert, unit, mul) = match flavor {
            Flavor::Ring => (op("add")?, op("neg")?, op("zero")?, op("mul")?),
            Flavor::Group => {
                let m = op("mul")?;
                (m, op("inv")?, op("e")?, m)
            }
        };
        let neutral = a.apply(unit, &[]);
        let full = if a.size() == 64 { u64::MAX } else { (1u64 << a.size()) - 1 };
        Ok(Structure { a, flavor, combine, invert, mul, neutral, full })
    }

    fn n(&self) -> usize {
        self.a.size()
    }

    fn op(&self, x: usize, y: usize) -> usize {
        self.a.apply2(self.combine, x, y)
    }

    fn inv(&self, x: usize) -> usize {
        self.a.apply(self.invert, &[x])
    }

    /// `xy = yx = 0` for rings, `xy = yx` for groups.
    fn annihilate(&self, x: usize, y: usize) -> bool {
        let (xy, yx) = (self.a.apply2(self.mul, x, y), self.a.apply2(self.mul, y, x));
        match self.flavor {
            Flavor::Ring => xy == self.neutral && yx == self.neutral,
            Flavor::Group => xy == yx,
        }
    }

    /// Smallest ideal (normal subgroup) containing `gens`.
    fn closure(&self, gens: u64) -> u64 {
        let mut set = gens | (1 << self.neutral);
        loop {
            let mut next = set;
            for x in bits(set) {
                next |= 1 << self.inv(x);
                for y in bits(set) {
                    next |= 1 << self.op(x, y);
                }
                for b in 0..self.n() {
                    match self.flavor {
                        Flavor::Ring => {
                            next |= 1 << self.a.apply2(self.mul, b, x);
                            next |= 1 << self.a.apply2(self.mul, x, b);
                        }
                        Flavor::Group => next |= 1 << self.op(self.op(b, x), self.inv(b)),
                    }
                }
            }
            if next == set {
                return set;
            }
            set = next;
        }
    }

    /// Two-sided annihilator (centralizer) of a subset.
    fn annihilator(&self, s: u64) -> u64 {
        (0..self.n())
            .filter(|&x| bits(s).all(|y| self.annihilate(x, y)))
            .fold(0, |acc, x| acc | 1 << x)
    }

    /// `S + T` (resp. `ST`).
    fn sum(&self, s: u64, t: u64) -> u64 {
        let mut out = 0;
        for x in bits(s) {
            for y in bits(t) {
                out |= 1 << self.op(x, y);
            }
        }
        out
    }

    fn center(&self) -> u64 {
        self.annihilator(self.full)
    }

    fn all_closed(&self) -> Vec<u64> {
        let mut found: Vec<u64> = vec![self.closure(0)];
        found.extend((0..self.n()).map(|x| self.closure(1 << x)));
        found.sort_unstable();
        found.dedup();
        loop {
            let mut next = found.clone();
            for (i, &s) in found.iter().enumerate() {
                for &t in &found[i + 1..] {
                    next.push(self.closure(s | t));
                }
            }
            next.sort_unstable();
            next.dedup();
            if next.len() == found.len() {
                break;
            }
            found = next;
        }
        found.sort_by_key(|&m| (m.count_ones(), m));
        found
    }

    fn wrap(&self, mask: u64) -> IdealOrNormal {
        IdealOrNormal { flavor: self.flavor, size: self.n(), mask }
    }
}

fn bits(mut mask: u64) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if mask == 0 {
            None
        } else {
            let i = mask.trailing_zeros() as usize;
            mask &= mask - 1;
            Some(i)
        }
    })
}

/// An ideal of a ring or a normal subgroup of a group, as a carrier subset.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct IdealOrNormal {
    flavor: Flavor,
    size: usize,
    mask: u64,
}

impl IdealOrNormal {
    /// Validates that `elements` is closed as an ideal (normal subgroup).
    pub fn new(a: &FiniteAlgebra, flavor: Flavor, elements: &[usize]) -> Result<Self> {
        let s = Structure::new(a, flavor)?;
        let mut mask = 0u64;
        for &x in elements {
            a.check_element(x)?;
            mask |= 1 << x;
        }
        if s.closure(mask) != mask {
            return Err(RelError::NotClosed {
                what: match flavor {
                    Flavor::Ring => "an ideal",
                    Flavor::Group => "a normal subgroup",
                },
            });
        }
        Ok(s.wrap(mask))
    }

    pub fn flavor(&self) -> Flavor {
        self.flavor
    }

    pub fn elements(&self) -> Vec<usize> {
        bits(self.mask).collect()
    }

    pub fn len(&self) -> usize {
        self.mask.count_ones() as usize
    }

    pub fn is_empty(&self) -> bool {
        self.mask == 0
    }

    pub fn contains(&self, x: usize) -> bool {
        x < self.size && self.mask & (1 << x) != 0
    }

    pub fn is_subset_of(&self, other: &IdealOrNormal) -> bool {
        self.mask & !other.mask == 0
    }

    pub fn is_whole(&self) -> bool {
        self.len() == self.size
    }
}

impl fmt::Display for IdealOrNormal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.elements().iter().map(usize::to_string).collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

impl Serialize for IdealOrNormal {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.elements().serialize(serializer)
    }
}

/// `Z(B) = { x : xb = bx = 0 for all b }`.
pub fn total_annihilator(b: &FiniteAlgebra) -> Result<IdealOrNormal> {
    let s = Structure::new(b, Flavor::Ring)?;
    let z = s.center();
    debug_assert_eq!(s.closure(z), z);
    Ok(s.wrap(z))
}

/// The centralizer of `n` in `k`, or the center when `n` is omitted.
pub fn center_or_centralizer(k: &FiniteAlgebra, n: Option<&IdealOrNormal>) -> Result<IdealOrNormal> {
    let s = Structure::new(k, Flavor::Group)?;
    Ok(s.wrap(s.annihilator(n.map_or(s.full, |n| n.mask))))
}

/// `Z(B)` for rings, `Z(K)` for groups.
pub fn center_of(a: &FiniteAlgebra, flavor: Flavor) -> Result<IdealOrNormal> {
    let s = Structure::new(a, flavor)?;
    Ok(s.wrap(s.center()))
}

/// Every ideal (normal subgroup), ordered by size then by mask.
pub fn ideals_or_normals(a: &FiniteAlgebra, flavor: Flavor) -> Result<Vec<IdealOrNormal>> {
    let s = Structure::new(a, flavor)?;
    Ok(s.all_closed().into_iter().map(|m| s.wrap(m)).collect())
}

fn is_almost_pair(s: &Structure, b0: u64, b1: u64) -> bool {
    s.sum(b0, b1) == s.full && s.annihilator(b1) == b0 && s.annihilator(b0) == b1
}

/// Ordered pairs `(B_0, B_1)` that span and are each other's annihilator
/// (centralizer).
pub fn almost_direct_factor_pairs(a: &FiniteAlgebra, flavor: Flavor) -> Result<Vec<(IdealOrNormal, IdealOrNormal)>> {
    let s = Structure::new(a, flavor)?;
    let all = s.all_closed();
    let mut pairs = Vec::new();
    for &b0 in &all {
        for &b1 in &all {
            if is_almost_pair(&s, b0, b1) {
                pairs.push((s.wrap(b0), s.wrap(b1)));
            }
        }
    }
    Ok(pairs)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum AlmostFact {
    /// Every almost direct factor contains the center.
    CenterContained,
    /// A factor strictly larger than the center does not annihilate itself.
    NotSelfAnnihilating,
    /// Mutually annihilating spanning ideals become factors after adding the center.
    MutualAnnihilation,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FactInstance {
    pub fact: AlmostFact,
    pub subjects: Vec<IdealOrNormal>,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AlmostFactsReport {
    pub algebra: String,
    pub flavor: Flavor,
    pub center: IdealOrNormal,
    pub closed_count: usize,
    pub factor_pairs: Vec<(IdealOrNormal, IdealOrNormal)>,
    pub instances: Vec<FactInstance>,
}

impl AlmostFactsReport {
    pub fn violations(&self) -> impl Iterator<Item = &FactInstance> {
        self.instances.iter().filter(|i| !i.passed)
    }

    pub fn holds(&self) -> bool {
        self.violations().next().is_none()
    }
}

pub fn verify_almost_facts(a: &FiniteAlgebra, flavor: Flavor) -> Result<AlmostFactsReport> {
    let s = Structure::new(a, flavor)?;
    let all = s.all_closed();
    let z = s.center();
    let mut pairs = Vec::new();
    for &b0 in &all {
        for &b1 in &all {
            if is_almost_pair(&s, b0, b1) {
                pairs.push((b0, b1));
            }
        }
    }
    let mut factors: Vec<u64> = pairs.iter().map(|&(b0, _)| b0).collect();
    factors.sort_unstable();
    factors.dedup();
    let mut instances = Vec::new();
    for &f in &factors {
        instances.push(FactInstance {
            fact: AlmostFact::CenterContained,
            subjects: vec![s.wrap(f)],
            passed: z & !f == 0,
        });
        if f != z && z & !f == 0 {
            instances.push(FactInstance {
                fact: AlmostFact::NotSelfAnnihilating,
                subjects: vec![s.wrap(f)],
                passed: f & !s.annihilator(f) != 0,
            });
        }
    }
    for &b0 in &all {
        for &b1 in &all {
            if s.sum(b0, b1) == s.full && b0 & !s.annihilator(b1) == 0 {
                let (c0, c1) = (s.sum(b0, z), s.sum(b1, z));
                instances.push(FactInstance {
                    fact: AlmostFact::MutualAnnihilation,
                    subjects: vec![s.wrap(b0), s.wrap(b1)],
                    passed: is_almost_pair(&s, c0, c1),
                });
            }
        }
    }
    Ok(AlmostFactsReport {
        algebra: a.name().to_string(),
        flavor,
        center: s.wrap(z),
        closed_count: all.len(),
        factor_pairs: pairs.into_iter().map(|(b0, b1)| (s.wrap(b0), s.wrap(b1))).collect(),
        instances,
    })
}

/// `A → B → B/Z(B)` factored through ultraproducts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CcFactorization {
    pub center: IdealOrNormal,
    pub quotient: FiniteAlgebra,
    pub centered: HomTable,
    pub factorization: Factorization,
}

impl CcFactorization {
    /// `bridge ∘ natural` agrees with the centered map on every element.
    pub fn composite_matches(&self) -> bool {
        (0..self.centered.domain().size()).all(|a| self.factorization.composite(a) == self.centered.apply(a))
    }
}

/// The quotient of `b` by its center, with the projection.
pub fn center_quotient(b: &FiniteAlgebra, flavor: Flavor) -> Result<(IdealOrNormal, FiniteAlgebra, HomTable)> {
    let s = Structure::new(b, flavor)?;
    let z = s.center();
    let congruence = match flavor {
        Flavor::Ring => {
            let pairs: Vec<(usize, usize)> = bits(z).map(|x| (x, s.neutral)).collect();
            congruence_generated(b, &pairs)?
        }
        Flavor::Group => {
            let labels: Vec<usize> = (0..b.size())
                .map(|x| bits(z).map(|c| s.op(x, c)).min().expect("center contains the identity"))
                .collect();
            Congruence::from_labels(&labels)
        }
    };
    let (q, proj) = quotient_algebra(b, &congruence)?;
    Ok((s.wrap(z), q, proj))
}

pub fn cc_factorization_demo(f: &HomTable, family: &ProductFamily, flavor: Flavor) -> Result<CcFactorization> {
    if !f.is_surjective() {
        return Err(RelError::NotSurjective { codomain: f.codomain().name().to_string() });
    }
    let (center, quotient, proj) = center_quotient(f.codomain(), flavor)?;
    let centered = f.then(&proj)?;
    let factorization = factor_homomorphism(&centered, family)?;
    Ok(CcFactorization { center, quotient, centered, factorization })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ChainStep {
    pub block: Vec<usize>,
    /// `f(∏_{J_0 ∪ .. ∪ J_m}) + Z(B)`.
    pub ideal: IdealOrNormal,
    pub strict: bool,
    /// `f(∏_{J_m})` is not inside the center.
    pub block_nontrivial: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ChainReport {
    pub center: IdealOrNormal,
    pub steps: Vec<ChainStep>,
}

impl ChainReport {
    /// Every step whose block survives in `B/Z(B)` is strict.
    pub fn holds(&self) -> bool {
        self.steps.iter().all(|s| s.strict || !s.block_nontrivial)
    }
}

/// The chain `Z(B) ⊆ f(∏_{J_0}) + Z(B) ⊆ f(∏_{J_0 ∪ J_1}) + Z(B) ⊆ ..`.
pub fn chain_strictness(
    f: &HomTable,
    family: &ProductFamily,
    parts: &[Vec<usize>],
    flavor: Flavor,
) -> Result<ChainReport> {
    if !f.is_surjective() {
        return Err(RelError::NotSurjective { codomain: f.codomain().name().to_string() });
    }
    let n = family.len();
    let mut owner = vec![usize::MAX; n];
    for (m, part) in parts.iter().enumerate() {
        for &i in part {
            if i >= n {
                return Err(RelError::NotAPartition { reason: format!("index {i} is outside 0..{n}") });
            }
            if owner[i] != usize::MAX {
                return Err(RelError::NotAPartition { reason: format!("index {i} appears twice") });
            }
            owner[i] = m;
        }
    }
    if let Some(i) = owner.iter().position(|&o| o == usize::MAX) {
        return Err(RelError::NotAPartition { reason: format!("index {i} is missing") });
    }
    let b = f.codomain();
    let s = Structure::new(b, flavor)?;
    let z = s.center();
    let supports: Vec<u32> = (0..family.carrier_size())
        .map(|a| Ok(support(a, family)?.mask()))
        .collect::<Result<_>>()?;
    let image = |keep: u32| -> u64 {
        supports
            .iter()
            .enumerate()
            .filter(|&(_, &sp)| sp & !keep == 0)
            .fold(0u64, |acc, (a, _)| acc | 1 << f.apply(a))
    };
    let mut steps = Vec::with_capacity(parts.len());
    let mut keep = 0u32;
    let mut previous = z;
    for part in parts {
        let block = part.iter().fold(0u32, |acc, &i| acc | 1 << i);
        keep |= block;
        let ideal = s.sum(image(keep), z);
        steps.push(ChainStep {
            block: part.clone(),
            ideal: s.wrap(ideal),
            strict: ideal != previous,
            block_nontrivial: image(block) & !z != 0,
        });
        previous = ideal;
    }
    Ok(ChainReport { center: s.wrap(z), steps })
}
