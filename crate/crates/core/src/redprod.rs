//! Reduced products of finite algebras and factorization of maps on direct
//! products through ultraproducts.
//!
//! A map `h` on `∏ A_i` determines the filter of index sets `J` such that
//! `h` depends only on the coordinates in `J`. On a finite index set that
//! filter is principal, its base points are the ultrafilters of the least
//! factorization, and `h` factors through `∏_m A/U_m`.

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::setfam::{
    decompose_filter, is_filter, FilterViolation, Filter, IndexSet, SetfamError, Subset, SubsetFamily, Ultrafilter,
};
use crate::ualg::{product_algebra, FiniteAlgebra, HomTable, Signature, Tags, TupleCodec, UalgError};
use crate::check::Check;

/// Largest index set for subset sweeps.
pub const MAX_SWEEP_INDEX: usize = 12;
/// Largest product carrier a family may have.
pub const MAX_PRODUCT_CARRIER: usize = 1 << 20;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RedprodError {
    #[error(transparent)]
    Setfam(#[from] SetfamError),
    #[error(transparent)]
    Ualg(#[from] UalgError),
    #[error("a product family needs at least one factor")]
    EmptyFamily,
    #[error("{what} of {size} exceeds the cap {cap}")]
    TooLarge { what: &'static str, size: u64, cap: u64 },
    #[error("factor {index} has no identity or zero tag")]
    MissingTag { index: usize },
    #[error("the codomain has no identity or zero tag")]
    MissingCodomainTag,
    #[error("map has {found} entries, the product carrier has {expected}")]
    MapLength { expected: usize, found: usize },
    #[error("filter is on {found} points, the family has {expected} factors")]
    IndexMismatch { expected: usize, found: usize },
    #[error("ultrafilter at point {point} is listed twice")]
    DuplicateUltrafilter { point: usize },
    #[error("parts do not partition the index set: {reason}")]
    NotAPartition { reason: String },
    #[error("homomorphism domain does not match the product family")]
    DomainMismatch,
    #[error("detected family is not a filter: {0}")]
    DetectedNotFilter(FilterViolation),
    #[error("bridge is not well defined at product element {element}")]
    BridgeNotWellDefined { element: usize },
    #[error("regrouping map is not a bijection")]
    RegroupNotBijective,
}

pub type Result<T> = std::result::Result<T, RedprodError>;

/// The factors `(A_i)_{i ∈ I}` of a direct product, `I = {0..n-1}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProductFamily {
    factors: Vec<FiniteAlgebra>,
    signature: Signature,
    codec: TupleCodec,
    strides: Vec<usize>,
}

impl ProductFamily {
    pub fn new(factors: Vec<FiniteAlgebra>) -> Result<Self> {
        let first = factors.first().ok_or(RedprodError::EmptyFamily)?;
        let signature = first.signature().clone();
        if factors.iter().any(|f| f.signature() != &signature) {
            return Err(UalgError::SignatureMismatch.into());
        }
        IndexSet::new(factors.len())?;
        let size = factors
            .iter()
            .try_fold(1u64, |acc, f| acc.checked_mul(f.size() as u64))
            .filter(|&s| s <= MAX_PRODUCT_CARRIER as u64)
            .ok_or_else(|| RedprodError::TooLarge {
                what: "product carrier",
                size: factors.iter().map(|f| f.size() as f64).product::<f64>() as u64,
                cap: MAX_PRODUCT_CARRIER as u64,
            })?;
        debug_assert!(size >= 1);
        let codec = TupleCodec::new(factors.iter().map(FiniteAlgebra::size).collect());
        let mut strides = Vec::with_capacity(factors.len());
        let mut s = 1;
        for f in &factors {
            strides.push(s);
            s *= f.size();
        }
        Ok(ProductFamily { factors, signature, codec, strides })
    }

    /// `A^n`.
    pub fn power(a: &FiniteAlgebra, n: usize) -> Result<Self> {
        ProductFamily::new(vec![a.clone(); n])
    }

    pub fn factors(&self) -> &[FiniteAlgebra] {
        &self.factors
    }

    pub fn len(&self) -> usize {
        self.factors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn index_set(&self) -> IndexSet {
        IndexSet::new(self.factors.len()).expect("validated at construction")
    }

    pub fn signature(&self) -> &Signature {
        &self.signature
    }

    pub fn codec(&self) -> &TupleCodec {
        &self.codec
    }

    pub fn carrier_size(&self) -> usize {
        self.codec.size()
    }

    /// Coordinate `i` of the product element `a`.
    pub fn coord(&self, a: usize, i: usize) -> usize {
        (a / self.strides[i]) % self.factors[i].size()
    }

    /// `a` with every coordinate outside `keep` replaced by 0.
    fn restrict(&self, a: usize, keep: u32) -> usize {
        (0..self.len())
            .filter(|&i| keep & (1 << i) == 0)
            .fold(a, |acc, i| acc - self.coord(a, i) * self.strides[i])
    }

    /// The product algebra with materialized tables.
    pub fn product(&self) -> Result<FiniteAlgebra> {
        Ok(product_algebra(&self.signature, &self.factors)?.0)
    }

    fn neutral(&self, i: usize) -> Result<usize> {
        self.factors[i].tags().neutral().ok_or(RedprodError::MissingTag { index: i })
    }

    fn check_filter(&self, f: &Filter) -> Result<()> {
        if f.parent().size() != self.len() {
            return Err(RedprodError::IndexMismatch { expected: self.len(), found: f.parent().size() });
        }
        Ok(())
    }

    fn check_map(&self, h: &[usize]) -> Result<()> {
        if h.len() != self.carrier_size() {
            return Err(RedprodError::MapLength { expected: self.carrier_size(), found: h.len() });
        }
        Ok(())
    }
}

/// Coordinates of `a` that differ from the factor's zero or identity tag.
pub fn support(a: usize, family: &ProductFamily) -> Result<Subset> {
    let mut mask = 0u32;
    for i in 0..family.len() {
        if family.coord(a, i) != family.neutral(i)? {
            mask |= 1 << i;
        }
    }
    Ok(family.index_set().subset(mask)?)
}

fn sweep_filter(family: &ProductFamily, member: impl Fn(u32) -> bool + Sync) -> Result<Filter> {
    let n = family.len();
    if n > MAX_SWEEP_INDEX {
        return Err(RedprodError::TooLarge { what: "index set", size: n as u64, cap: MAX_SWEEP_INDEX as u64 });
    }
    let parent = family.index_set();
    let masks: Vec<u32> = (0..1u32 << n).into_par_iter().filter(|&m| member(m)).collect();
    let fam = SubsetFamily::new(parent, masks.into_iter().map(|m| parent.subset(m).expect("mask in range")))?;
    match is_filter(&fam) {
        Check::Holds => Ok(Filter::try_from_family(&fam)?),
        Check::Fails(v) => Err(RedprodError::DetectedNotFilter(v)),
    }
}

/// The filter of index sets `J` such that `h` factors through the
/// projection onto `∏_{i∈J} A_i`. `h` is any map on the product carrier.
pub fn detected_filter(h: &[usize], family: &ProductFamily) -> Result<Filter> {
    family.check_map(h)?;
    sweep_filter(family, |keep| (0..h.len()).all(|a| h[a] == h[family.restrict(a, keep)]))
}

/// The filter of index sets `J` such that every tuple supported in `I − J`
/// lies in the kernel of `h`.
pub fn kernel_filter(h: &HomTable, family: &ProductFamily) -> Result<Filter> {
    if h.domain().size() != family.carrier_size() || h.domain().signature() != family.signature() {
        return Err(RedprodError::DomainMismatch);
    }
    let e = h.codomain().tags().neutral().ok_or(RedprodError::MissingCodomainTag)?;
    let neutral: Vec<usize> = (0..family.len()).map(|i| family.neutral(i)).collect::<Result<_>>()?;
    let map = h.map();
    sweep_filter(family, |keep| {
        (0..map.len())
            .filter(|&a| (0..family.len()).all(|i| keep & (1 << i) == 0 || family.coord(a, i) == neutral[i]))
            .all(|a| map[a] == e)
    })
}

/// Classes of `∏ A_i / f`: two tuples are equivalent iff they agree on the
/// base of `f`. Class indices encode the base coordinates little-endian.
fn classes(family: &ProductFamily, f: &Filter) -> (TupleCodec, Vec<usize>, Vec<usize>) {
    let base = f.base().elements();
    let codec = TupleCodec::new(base.iter().map(|&i| family.factors[i].size()).collect());
    let mut coords = vec![0; base.len()];
    let class_of: Vec<usize> = (0..family.carrier_size())
        .map(|a| {
            for (c, &i) in coords.iter_mut().zip(&base) {
                *c = family.coord(a, i);
            }
            codec.encode(&coords)
        })
        .collect();
    let mut reps = vec![usize::MAX; codec.size()];
    for (a, &c) in class_of.iter().enumerate() {
        if reps[c] == usize::MAX {
            reps[c] = a;
        }
    }
    (codec, class_of, reps)
}

/// `(∏ A_i)/f` with its induced operations and canonical map.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReducedProduct {
    filter: Filter,
    class_codec: TupleCodec,
    class_of: Vec<usize>,
    reps: Vec<usize>,
    algebra: FiniteAlgebra,
    canonical: HomTable,
}

impl ReducedProduct {
    pub fn filter(&self) -> &Filter {
        &self.filter
    }

    pub fn class_count(&self) -> usize {
        self.reps.len()
    }

    pub fn class_of(&self, a: usize) -> usize {
        self.class_of[a]
    }

    /// Least product element of each class.
    pub fn representatives(&self) -> &[usize] {
        &self.reps
    }

    /// Codec from base coordinates to class index.
    pub fn class_codec(&self) -> &TupleCodec {
        &self.class_codec
    }

    pub fn algebra(&self) -> &FiniteAlgebra {
        &self.algebra
    }

    pub fn canonical(&self) -> &HomTable {
        &self.canonical
    }
}

pub fn reduced_product(family: &ProductFamily, f: &Filter) -> Result<ReducedProduct> {
    family.check_filter(f)?;
    let (class_codec, class_of, reps) = classes(family, f);
    let count = reps.len();
    let n = family.len();
    let mut tables = Vec::new();
    for (op, sym) in family.signature.symbols().iter().enumerate() {
        let len = count.checked_pow(sym.arity as u32).filter(|&l| l as u64 <= crate::ualg::PRODUCT_TABLE_CAP).ok_or(
            RedprodError::TooLarge {
                what: "reduced product table",
                size: (count as f64).powi(sym.arity as i32) as u64,
                cap: crate::ualg::PRODUCT_TABLE_CAP,
            },
        )?;
        let mut table = Vec::with_capacity(len);
        let mut args = vec![0usize; sym.arity];
        let mut local = vec![0usize; sym.arity];
        let mut out = vec![0usize; n];
        for index in 0..len {
            let mut rest = index;
            for a in args.iter_mut() {
                *a = reps[rest % count];
                rest /= count;
            }
            for (i, o) in out.iter_mut().enumerate() {
                for (l, &a) in local.iter_mut().zip(&args) {
                    *l = family.coord(a, i);
                }
                *o = family.factors[i].apply(op, &local);
            }
            table.push(class_of[family.codec.encode(&out)]);
        }
        tables.push(table);
    }
    let lift = |pick: fn(&Tags) -> Option<usize>| -> Option<usize> {
        let coords = family.factors.iter().map(|a| pick(&a.tags())).collect::<Option<Vec<_>>>()?;
        Some(class_of[family.codec.encode(&coords)])
    };
    let tags = Tags { identity: lift(|t| t.identity), zero: lift(|t| t.zero) };
    let name = format!("({})/{}", family.factors.iter().map(|a| a.name()).collect::<Vec<_>>().join("×"), f.base());
    let algebra = FiniteAlgebra::new(&name, family.signature.clone(), count, tables, tags)?;
    let canonical = HomTable::new(family.product()?, algebra.clone(), class_of.clone())?;
    Ok(ReducedProduct { filter: *f, class_codec, class_of, reps, algebra, canonical })
}

fn ultrafilter_points(family: &ProductFamily, ultras: &[Ultrafilter]) -> Result<Vec<usize>> {
    let mut seen = 0u32;
    let mut points = Vec::with_capacity(ultras.len());
    for u in ultras {
        if u.parent().size() != family.len() {
            return Err(RedprodError::IndexMismatch { expected: family.len(), found: u.parent().size() });
        }
        if seen & (1 << u.point()) != 0 {
            return Err(RedprodError::DuplicateUltrafilter { point: u.point() });
        }
        seen |= 1 << u.point();
        points.push(u.point());
    }
    Ok(points)
}

/// `A → ∏_m A/U_m` as a table, with the codec of the target.
fn natural_map(family: &ProductFamily, points: &[usize]) -> (TupleCodec, Vec<usize>) {
    let codec = TupleCodec::new(points.iter().map(|&p| family.factors[p].size()).collect());
    let mut coords = vec![0; points.len()];
    let map = (0..family.carrier_size())
        .map(|a| {
            for (c, &p) in coords.iter_mut().zip(points) {
                *c = family.coord(a, p);
            }
            codec.encode(&coords)
        })
        .collect();
    (codec, map)
}

/// Outcome of checking that `A → ∏_m A/U_m` is onto.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SurjectivityReport {
    pub points: Vec<usize>,
    pub target_size: usize,
    pub image_size: usize,
    pub surjective: bool,
    /// `A/(∩ U_m) → ∏_m A/U_m` is a bijection.
    pub bijective: bool,
    /// Blocks `J_m ∈ U_m` partitioning `I`.
    pub partition: Vec<Vec<usize>>,
    /// For each target index, the patched preimage.
    pub sections: Vec<usize>,
    /// Every section maps back to its target.
    pub sections_valid: bool,
}

impl SurjectivityReport {
    pub fn holds(&self) -> bool {
        self.surjective && self.bijective && self.sections_valid
    }
}

pub fn verify_surjectivity(family: &ProductFamily, ultras: &[Ultrafilter]) -> Result<SurjectivityReport> {
    let points = ultrafilter_points(family, ultras)?;
    let (codec, nat) = natural_map(family, &points);
    let mut hit = vec![false; codec.size()];
    for &t in &nat {
        hit[t] = true;
    }
    let image_size = hit.iter().filter(|&&h| h).count();

    let parent = family.index_set();
    let meet = crate::setfam::intersect_ultrafilters(parent, ultras);
    let (_, class_of, reps) = classes(family, &meet);
    let mut induced = vec![usize::MAX; reps.len()];
    let mut well_defined = true;
    for (a, &c) in class_of.iter().enumerate() {
        if induced[c] == usize::MAX {
            induced[c] = nat[a];
        } else if induced[c] != nat[a] {
            well_defined = false;
        }
    }
    let mut seen = vec![false; codec.size()];
    let injective = induced.iter().all(|&t| !std::mem::replace(&mut seen[t], true));
    let bijective = well_defined && injective && reps.len() == codec.size();

    // J_m = {p_m} for m > 0 and J_0 takes every remaining index.
    let mut owner = vec![0usize; family.len()];
    for (m, &p) in points.iter().enumerate().skip(1) {
        owner[p] = m;
    }
    let partition: Vec<Vec<usize>> = (0..points.len())
        .map(|m| (0..family.len()).filter(|&i| owner[i] == m).collect())
        .collect();
    let single: Vec<(TupleCodec, Vec<usize>, Vec<usize>)> = ultras.iter().map(|u| classes(family, &u.as_filter())).collect();
    let mut target = vec![0; points.len()];
    let mut coords = vec![0; family.len()];
    let sections: Vec<usize> = (0..codec.size())
        .map(|t| {
            target.copy_from_slice(&codec.decode(t));
            for (i, c) in coords.iter_mut().enumerate() {
                if points.is_empty() {
                    *c = 0;
                } else {
                    let m = owner[i];
                    let rep = single[m].2[target[m]];
                    *c = family.coord(rep, i);
                }
            }
            family.codec.encode(&coords)
        })
        .collect();
    let sections_valid = sections.iter().enumerate().all(|(t, &a)| nat[a] == t);
    Ok(SurjectivityReport {
        points,
        target_size: codec.size(),
        image_size,
        surjective: image_size == codec.size(),
        bijective,
        partition,
        sections,
        sections_valid,
    })
}

/// `h = bridge ∘ natural` with `natural: A → ∏_m A/U_m`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factorization {
    filter: Filter,
    ultrafilters: Vec<Ultrafilter>,
    target_codec: TupleCodec,
    natural: Vec<usize>,
    bridge: Vec<usize>,
    bridge_hom: Option<HomTable>,
}

/// Printed form of a factorization.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FactorizationDoc {
    pub filter_base: Vec<usize>,
    pub ultrafilter_points: Vec<usize>,
    pub bridge_table: Vec<usize>,
}

impl Factorization {
    pub fn filter(&self) -> &Filter {
        &self.filter
    }

    pub fn ultrafilters(&self) -> &[Ultrafilter] {
        &self.ultrafilters
    }

    pub fn points(&self) -> Vec<usize> {
        self.ultrafilters.iter().map(Ultrafilter::point).collect()
    }

    /// Codec of `∏_m A/U_m`; coordinate `m` is the class in `A/U_m`.
    pub fn target_codec(&self) -> &TupleCodec {
        &self.target_codec
    }

    pub fn natural(&self) -> &[usize] {
        &self.natural
    }

    pub fn bridge(&self) -> &[usize] {
        &self.bridge
    }

    /// The bridge as a homomorphism, when the factored map was one.
    pub fn bridge_hom(&self) -> Option<&HomTable> {
        self.bridge_hom.as_ref()
    }

    /// `bridge(natural(a))`.
    pub fn composite(&self, a: usize) -> usize {
        self.bridge[self.natural[a]]
    }

    pub fn to_doc(&self) -> FactorizationDoc {
        FactorizationDoc {
            filter_base: self.filter.base().elements(),
            ultrafilter_points: self.points(),
            bridge_table: self.bridge.clone(),
        }
    }
}

/// Factors a set map on the product through the ultraproducts of its
/// detected filter. The bridge takes each target tuple to `h` of its least
/// preimage and is checked against every product element.
pub fn factor_map(h: &[usize], family: &ProductFamily) -> Result<Factorization> {
    let filter = detected_filter(h, family)?;
    let ultrafilters = decompose_filter(&filter);
    let points: Vec<usize> = ultrafilters.iter().map(Ultrafilter::point).collect();
    let (target_codec, natural) = natural_map(family, &points);
    let mut bridge = vec![usize::MAX; target_codec.size()];
    for (a, &t) in natural.iter().enumerate() {
        if bridge[t] == usize::MAX {
            bridge[t] = h[a];
        } else if bridge[t] != h[a] {
            return Err(RedprodError::BridgeNotWellDefined { element: a });
        }
    }
    Ok(Factorization { filter, ultrafilters, target_codec, natural, bridge, bridge_hom: None })
}

/// [`factor_map`] for a homomorphism; the bridge is a homomorphism from the
/// product of ultrapowers `∏_m A/U_m` to the codomain.
pub fn factor_homomorphism(h: &HomTable, family: &ProductFamily) -> Result<Factorization> {
    if h.domain().size() != family.carrier_size() || h.domain().signature() != family.signature() {
        return Err(RedprodError::DomainMismatch);
    }
    let mut fz = factor_map(h.map(), family)?;
    let quotients = fz
        .ultrafilters
        .iter()
        .map(|u| Ok(reduced_product(family, &u.as_filter())?.algebra().clone()))
        .collect::<Result<Vec<_>>>()?;
    let (target, _) = product_algebra(family.signature(), &quotients)?;
    fz.bridge_hom = Some(HomTable::new(target, h.codomain().clone(), fz.bridge.clone())?);
    Ok(fz)
}

/// `∏_I A_i ≅ ∏_s ∏_{i∈J_s} A_i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Regrouping {
    parts: Vec<Vec<usize>>,
    outer: ProductFamily,
    iso: HomTable,
}

impl Regrouping {
    pub fn parts(&self) -> &[Vec<usize>] {
        &self.parts
    }

    pub fn outer(&self) -> &ProductFamily {
        &self.outer
    }

    pub fn iso(&self) -> &HomTable {
        &self.iso
    }
}

/// Regroups the factors by `parts` (each part read in the order given).
/// The isomorphism is checked to be a bijective homomorphism.
pub fn regroup_product(family: &ProductFamily, parts: &[Vec<usize>]) -> Result<Regrouping> {
    let n = family.len();
    let mut seen = vec![false; n];
    for &i in parts.iter().flatten() {
        if i >= n {
            return Err(RedprodError::NotAPartition { reason: format!("index {i} is outside 0..{n}") });
        }
        if std::mem::replace(&mut seen[i], true) {
            return Err(RedprodError::NotAPartition { reason: format!("index {i} appears twice") });
        }
    }
    if let Some(i) = seen.iter().position(|&s| !s) {
        return Err(RedprodError::NotAPartition { reason: format!("index {i} is missing") });
    }
    let inner = parts
        .iter()
        .map(|part| {
            let factors: Vec<FiniteAlgebra> = part.iter().map(|&i| family.factors[i].clone()).collect();
            Ok(product_algebra(family.signature(), &factors)?)
        })
        .collect::<Result<Vec<_>>>()?;
    let outer = ProductFamily::new(inner.iter().map(|(a, _)| a.clone()).collect())?;
    let map: Vec<usize> = (0..family.carrier_size())
        .map(|a| {
            let outer_coords: Vec<usize> = parts
                .iter()
                .zip(&inner)
                .map(|(part, (_, codec))| {
                    let c: Vec<usize> = part.iter().map(|&i| family.coord(a, i)).collect();
                    codec.encode(&c)
                })
                .collect();
            outer.codec.encode(&outer_coords)
        })
        .collect();
    let mut hit = vec![false; outer.carrier_size()];
    for &v in &map {
        if std::mem::replace(&mut hit[v], true) {
            return Err(RedprodError::RegroupNotBijective);
        }
    }
    let iso = HomTable::new(family.product()?, outer.product()?, map)?;
    Ok(Regrouping { parts: parts.to_vec(), outer, iso })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use crate::setfam::least_bdd_n;

    fn z2_cube() -> ProductFamily {
        ProductFamily::power(&corpus::cyclic_group(2), 3).unwrap()
    }

    /// Detected filter straight from the definition: compare all pairs.
    fn detected_by_pairs(h: &[usize], family: &ProductFamily) -> Vec<u32> {
        let n = family.len();
        (0..1u32 << n)
            .filter(|&keep| {
                (0..h.len()).all(|a| {
                    (0..h.len()).all(|b| {
                        let agree = (0..n).all(|i| keep & (1 << i) == 0 || family.coord(a, i) == family.coord(b, i));
                        !agree || h[a] == h[b]
                    })
                })
            })
            .collect()
    }

    #[test]
    fn support_examples() {
        let fam = z2_cube();
        assert!(support(0, &fam).unwrap().is_empty());
        let a = fam.codec().encode(&[1, 0, 1]);
        assert_eq!(support(a, &fam).unwrap().elements(), vec![0, 2]);
        let single = ProductFamily::power(&corpus::cyclic_group(3), 1).unwrap();
        assert_eq!(support(2, &single).unwrap().elements(), vec![0]);
        let lat = ProductFamily::power(&corpus::chain_lattice(2), 2).unwrap();
        assert_eq!(support(0, &lat).unwrap_err(), RedprodError::MissingTag { index: 0 });
    }

    #[test]
    fn detected_filter_examples() {
        let z3 = corpus::cyclic_group(3);
        let fam = ProductFamily::power(&z3, 2).unwrap();
        let proj: Vec<usize> = (0..9).map(|a| fam.coord(a, 0)).collect();
        assert_eq!(detected_filter(&proj, &fam).unwrap().base().elements(), vec![0]);
        let mul = z3.op_index("mul").unwrap();
        let op: Vec<usize> = (0..9).map(|a| z3.apply2(mul, fam.coord(a, 0), fam.coord(a, 1))).collect();
        assert_eq!(detected_filter(&op, &fam).unwrap(), Filter::trivial(fam.index_set()));
        assert_eq!(detected_filter(&[4; 9], &fam).unwrap(), Filter::improper(fam.index_set()));
        for h in [proj, op] {
            let f = detected_filter(&h, &fam).unwrap();
            let expected: Vec<u32> = f.members().map(|s| s.mask()).collect();
            assert_eq!(detected_by_pairs(&h, &fam), expected);
        }
    }

    #[test]
    fn kernel_filter_examples() {
        let z2 = corpus::cyclic_group(2);
        let fam = z2_cube();
        let prod = fam.product().unwrap();
        let proj = HomTable::new(prod.clone(), z2.clone(), (0..8).map(|a| fam.coord(a, 0)).collect()).unwrap();
        assert_eq!(kernel_filter(&proj, &fam).unwrap().base().elements(), vec![0]);
        let trivial = HomTable::new(prod.clone(), z2.clone(), vec![0; 8]).unwrap();
        assert!(!kernel_filter(&trivial, &fam).unwrap().is_proper());
        let sum: Vec<usize> = (0..8).map(|a| (0..3).map(|i| fam.coord(a, i)).sum::<usize>() % 2).collect();
        let sum = HomTable::new(prod, z2, sum).unwrap();
        let k = kernel_filter(&sum, &fam).unwrap();
        assert_eq!(k, Filter::trivial(fam.index_set()));
        assert_eq!(k, detected_filter(sum.map(), &fam).unwrap());
    }

    #[test]
    fn reduced_product_examples() {
        let fam = z2_cube();
        let p = fam.index_set();
        let full = reduced_product(&fam, &Filter::trivial(p)).unwrap();
        assert_eq!(full.class_count(), 8);
        assert!(full.canonical().is_surjective());
        let one = reduced_product(&fam, &Filter::improper(p)).unwrap();
        assert_eq!(one.class_count(), 1);
        let f = Filter::principal(p.subset_of(&[0, 1]).unwrap());
        let rp = reduced_product(&fam, &f).unwrap();
        assert_eq!(rp.class_count(), 4);
        // Classes by the definition: {i : a_i = b_i} ∈ f.
        for a in 0..8 {
            for b in 0..8 {
                let agree = (0..3).filter(|&i| fam.coord(a, i) == fam.coord(b, i)).collect::<Vec<_>>();
                let same = f.contains(p.subset_of(&agree).unwrap());
                assert_eq!(rp.class_of(a) == rp.class_of(b), same);
            }
        }
    }

    #[test]
    fn surjectivity_examples() {
        let z2 = corpus::cyclic_group(2);
        let two = ProductFamily::power(&z2, 2).unwrap();
        let u = |fam: &ProductFamily, p| Ultrafilter::new(fam.index_set(), p).unwrap();
        let r = verify_surjectivity(&two, &[u(&two, 0), u(&two, 1)]).unwrap();
        assert!(r.holds());
        assert_eq!(r.target_size, 4);
        let fam = z2_cube();
        let r = verify_surjectivity(&fam, &[u(&fam, 0), u(&fam, 2)]).unwrap();
        assert!(r.holds());
        assert_eq!(r.image_size, 4);
        assert_eq!(r.partition, vec![vec![0, 1], vec![2]]);
        let r = verify_surjectivity(&fam, &[u(&fam, 1)]).unwrap();
        assert!(r.holds());
        assert_eq!(
            verify_surjectivity(&fam, &[u(&fam, 1), u(&fam, 1)]).unwrap_err(),
            RedprodError::DuplicateUltrafilter { point: 1 }
        );
    }

    #[test]
    fn factorization_examples() {
        let z2 = corpus::cyclic_group(2);
        let fam = z2_cube();
        let prod = fam.product().unwrap();
        let (z2sq, codec) = product_algebra(z2.signature(), &[z2.clone(), z2.clone()]).unwrap();
        let h: Vec<usize> = (0..8).map(|a| codec.encode(&[fam.coord(a, 0), fam.coord(a, 2)])).collect();
        let h = HomTable::new(prod.clone(), z2sq, h).unwrap();
        let fz = factor_homomorphism(&h, &fam).unwrap();
        assert_eq!(fz.points(), vec![0, 2]);
        assert_eq!(fz.points().len(), least_bdd_n(fz.filter()));
        assert!((0..8).all(|a| fz.composite(a) == h.apply(a)));

        let proj = HomTable::new(prod.clone(), z2.clone(), (0..8).map(|a| fam.coord(a, 0)).collect()).unwrap();
        let fz = factor_homomorphism(&proj, &fam).unwrap();
        assert_eq!(fz.to_doc(), FactorizationDoc { filter_base: vec![0], ultrafilter_points: vec![0], bridge_table: vec![0, 1] });

        let trivial = HomTable::new(prod, z2, vec![0; 8]).unwrap();
        let fz = factor_homomorphism(&trivial, &fam).unwrap();
        assert!(fz.points().is_empty());
        assert_eq!(fz.bridge_hom().unwrap().domain().size(), 1);
    }

    #[test]
    fn regroup_examples() {
        let fam = ProductFamily::power(&corpus::cyclic_group(2), 4).unwrap();
        let r = regroup_product(&fam, &[vec![0, 1], vec![2, 3]]).unwrap();
        assert_eq!(r.outer().len(), 2);
        assert_eq!(r.outer().factors()[0].size(), 4);
        assert!(r.iso().is_surjective());
        let id = regroup_product(&fam, &[vec![0, 1, 2, 3]]).unwrap();
        assert_eq!(id.iso().map(), (0..16).collect::<Vec<_>>().as_slice());
        let singles = regroup_product(&fam, &[vec![0], vec![1], vec![2], vec![3]]).unwrap();
        assert_eq!(singles.iso().map(), (0..16).collect::<Vec<_>>().as_slice());
        assert!(matches!(regroup_product(&fam, &[vec![0, 1], vec![1, 2, 3]]), Err(RedprodError::NotAPartition { .. })));
        assert!(matches!(regroup_product(&fam, &[vec![0, 1], vec![2]]), Err(RedprodError::NotAPartition { .. })));
    }
}
