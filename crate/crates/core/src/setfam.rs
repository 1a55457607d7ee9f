//! Subsets of a finite index set and the set systems built from them:
//! filters, ultrafilters, grills, ideals and co-filters.
//!
//! Subsets are bit masks over `0..size`. On a finite index set every filter
//! is principal, so a [`Filter`] is stored through its base (the intersection
//! of all its members) and membership is `base ⊆ J`. Whenever a filter is
//! obtained from an explicit family, that family is checked against the
//! up-set of its base before the filter is handed out.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize, Serializer};
use thiserror::Error;

use crate::check::Check;

/// Largest supported index set.
pub const MAX_INDEX_SIZE: usize = 24;

/// Largest index set for which whole families of subsets are materialized.
pub const MAX_FAMILY_INDEX_SIZE: usize = 16;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SetfamError {
    #[error("index set size {0} outside 1..={MAX_INDEX_SIZE}")]
    IndexSizeOutOfRange(usize),
    #[error("element {element} outside index set of size {size}")]
    ElementOutOfRange { element: usize, size: usize },
    #[error("subsets belong to index sets of different sizes ({0} and {1})")]
    MismatchedParent(usize, usize),
    #[error("materializing a family over an index set of size {size} exceeds the cap {cap}")]
    TooLarge { size: usize, cap: usize },
    #[error("family is not a filter: {0}")]
    NotAFilter(FilterViolation),
}

/// The index set `{0, .., size-1}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IndexSet {
    size: u8,
}

impl IndexSet {
    pub fn new(size: usize) -> Result<Self, SetfamError> {
        if size == 0 || size > MAX_INDEX_SIZE {
            return Err(SetfamError::IndexSizeOutOfRange(size));
        }
        Ok(IndexSet { size: size as u8 })
    }

    pub fn size(self) -> usize {
        self.size as usize
    }

    pub fn full_mask(self) -> u32 {
        if self.size() == 32 {
            u32::MAX
        } else {
            (1u32 << self.size()) - 1
        }
    }

    pub fn full(self) -> Subset {
        Subset { parent: self, mask: self.full_mask() }
    }

    pub fn empty(self) -> Subset {
        Subset { parent: self, mask: 0 }
    }

    pub fn subset(self, mask: u32) -> Result<Subset, SetfamError> {
        if mask & !self.full_mask() != 0 {
            let element = (31 - (mask & !self.full_mask()).leading_zeros()) as usize;
            return Err(SetfamError::ElementOutOfRange { element, size: self.size() });
        }
        Ok(Subset { parent: self, mask })
    }

    pub fn subset_of(self, elements: &[usize]) -> Result<Subset, SetfamError> {
        let mut mask = 0u32;
        for &e in elements {
            if e >= self.size() {
                return Err(SetfamError::ElementOutOfRange { element: e, size: self.size() });
            }
            mask |= 1 << e;
        }
        Ok(Subset { parent: self, mask })
    }

    pub fn singleton(self, point: usize) -> Result<Subset, SetfamError> {
        self.subset_of(&[point])
    }

    /// All `2^size` subsets in increasing mask order.
    pub fn power_set(self) -> impl Iterator<Item = Subset> {
        (0..=self.full_mask()).map(move |mask| Subset { parent: self, mask })
    }
}

/// A subset of an [`IndexSet`].
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Subset {
    parent: IndexSet,
    mask: u32,
}

impl Subset {
    pub fn parent(self) -> IndexSet {
        self.parent
    }

    pub fn mask(self) -> u32 {
        self.mask
    }

    pub fn len(self) -> usize {
        self.mask.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.mask == 0
    }

    pub fn contains(self, i: usize) -> bool {
        i < 32 && self.mask & (1 << i) != 0
    }

    pub fn complement(self) -> Subset {
        Subset { parent: self.parent, mask: !self.mask & self.parent.full_mask() }
    }

    pub fn intersection(self, other: Subset) -> Subset {
        Subset { parent: self.parent, mask: self.mask & other.mask }
    }

    pub fn union(self, other: Subset) -> Subset {
        Subset { parent: self.parent, mask: self.mask | other.mask }
    }

    pub fn is_subset_of(self, other: Subset) -> bool {
        self.mask & !other.mask == 0
    }

    pub fn meets(self, other: Subset) -> bool {
        self.mask & other.mask != 0
    }

    pub fn elements(self) -> Vec<usize> {
        (0..self.parent.size()).filter(|&i| self.contains(i)).collect()
    }

    /// All supersets of `self` inside the parent index set.
    pub fn supersets(self) -> impl Iterator<Item = Subset> {
        let free = self.complement().mask;
        let parent = self.parent;
        let base = self.mask;
        SubmaskIter::new(free).map(move |extra| Subset { parent, mask: base | extra })
    }
}

impl fmt::Debug for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (k, e) in self.elements().into_iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, "}}")
    }
}

impl Serialize for Subset {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.elements().serialize(serializer)
    }
}

/// Enumerates all submasks of a mask, starting from 0.
struct SubmaskIter {
    full: u32,
    next: Option<u32>,
}

impl SubmaskIter {
    fn new(full: u32) -> Self {
        SubmaskIter { full, next: Some(0) }
    }
}

impl Iterator for SubmaskIter {
    type Item = u32;

    fn next(&mut self) -> Option<u32> {
        let cur = self.next?;
        self.next = if cur == self.full {
            None
        } else {
            // Increment within the bits of `full`.
            Some((cur | !self.full).wrapping_add(1) & self.full)
        };
        Some(cur)
    }
}

/// A finite family of subsets of one index set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubsetFamily {
    parent: IndexSet,
    members: BTreeSet<u32>,
}

impl SubsetFamily {
    pub fn empty(parent: IndexSet) -> Self {
        SubsetFamily { parent, members: BTreeSet::new() }
    }

    pub fn new(parent: IndexSet, members: impl IntoIterator<Item = Subset>) -> Result<Self, SetfamError> {
        let mut family = SubsetFamily::empty(parent);
        for s in members {
            family.insert(s)?;
        }
        Ok(family)
    }

    pub fn from_lists(parent: IndexSet, lists: &[Vec<usize>]) -> Result<Self, SetfamError> {
        let subsets = lists
            .iter()
            .map(|l| parent.subset_of(l))
            .collect::<Result<Vec<_>, _>>()?;
        SubsetFamily::new(parent, subsets)
    }

    pub fn insert(&mut self, s: Subset) -> Result<bool, SetfamError> {
        if s.parent != self.parent {
            return Err(SetfamError::MismatchedParent(self.parent.size(), s.parent.size()));
        }
        Ok(self.members.insert(s.mask))
    }

    pub fn parent(&self) -> IndexSet {
        self.parent
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, s: Subset) -> bool {
        s.parent == self.parent && self.members.contains(&s.mask)
    }

    pub fn iter(&self) -> impl Iterator<Item = Subset> + '_ {
        let parent = self.parent;
        self.members.iter().map(move |&mask| Subset { parent, mask })
    }

    /// The family of complements of the members.
    pub fn complements(&self) -> SubsetFamily {
        SubsetFamily {
            parent: self.parent,
            members: self.iter().map(|s| s.complement().mask).collect(),
        }
    }

    /// The members of the power set that are not in this family.
    pub fn complement_in_power_set(&self) -> Result<SubsetFamily, SetfamError> {
        ensure_materializable(self.parent)?;
        Ok(SubsetFamily {
            parent: self.parent,
            members: self.parent.power_set().filter(|s| !self.contains(*s)).map(|s| s.mask).collect(),
        })
    }
}

fn ensure_materializable(parent: IndexSet) -> Result<(), SetfamError> {
    if parent.size() > MAX_FAMILY_INDEX_SIZE {
        return Err(SetfamError::TooLarge { size: parent.size(), cap: MAX_FAMILY_INDEX_SIZE });
    }
    Ok(())
}

/// The first violated filter condition found in a family.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "condition", rename_all = "snake_case")]
pub enum FilterViolation {
    /// The whole index set is not a member.
    MissingTop,
    /// `member` is present but its superset `missing` is not.
    NotUpwardClosed { member: Subset, missing: Subset },
    /// `left` and `right` are members but their intersection is not.
    NotClosedUnderIntersection { left: Subset, right: Subset, missing: Subset },
}

impl fmt::Display for FilterViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FilterViolation::MissingTop => write!(f, "the whole index set is missing"),
            FilterViolation::NotUpwardClosed { member, missing } => {
                write!(f, "{member} is a member but its superset {missing} is not")
            }
            FilterViolation::NotClosedUnderIntersection { left, right, missing } => {
                write!(f, "{left} and {right} are members but their intersection {missing} is not")
            }
        }
    }
}

/// Checks the three filter conditions in order: the top element, upward
/// closure, closure under pairwise intersection.
pub fn is_filter(family: &SubsetFamily) -> Check<FilterViolation> {
    let parent = family.parent;
    if !family.contains(parent.full()) {
        return Check::Fails(FilterViolation::MissingTop);
    }
    // Upward closure is equivalent to closure under adding one point.
    for member in family.iter() {
        for i in 0..parent.size() {
            if !member.contains(i) {
                let bigger = Subset { parent, mask: member.mask | (1 << i) };
                if !family.contains(bigger) {
                    return Check::Fails(FilterViolation::NotUpwardClosed { member, missing: bigger });
                }
            }
        }
    }
    // With upward closure in hand, a running intersection over the members
    // meets every pairwise intersection that could be missing.
    let mut running = parent.full();
    for member in family.iter() {
        let meet = running.intersection(member);
        if !family.contains(meet) {
            return Check::Fails(FilterViolation::NotClosedUnderIntersection {
                left: running,
                right: member,
                missing: meet,
            });
        }
        running = meet;
    }
    Check::Holds
}

/// A filter on a finite index set, stored by its base.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Filter {
    parent: IndexSet,
    base: u32,
}

impl Filter {
    /// The principal filter `{ J : base ⊆ J }`.
    pub fn principal(base: Subset) -> Filter {
        Filter { parent: base.parent, base: base.mask }
    }

    /// The trivial filter `{I}`.
    pub fn trivial(parent: IndexSet) -> Filter {
        Filter::principal(parent.full())
    }

    /// The improper filter containing every subset.
    pub fn improper(parent: IndexSet) -> Filter {
        Filter::principal(parent.empty())
    }

    /// Accepts a family only if it already is a filter.
    pub fn try_from_family(family: &SubsetFamily) -> Result<Filter, SetfamError> {
        if let Check::Fails(v) = is_filter(family) {
            return Err(SetfamError::NotAFilter(v));
        }
        let filter = close_to_filter(family);
        debug_assert_eq!(filter.member_count(), family.len() as u64);
        Ok(filter)
    }

    pub fn parent(&self) -> IndexSet {
        self.parent
    }

    pub fn base(&self) -> Subset {
        Subset { parent: self.parent, mask: self.base }
    }

    pub fn is_proper(&self) -> bool {
        self.base != 0
    }

    pub fn contains(&self, s: Subset) -> bool {
        s.parent == self.parent && self.base & !s.mask == 0
    }

    pub fn member_count(&self) -> u64 {
        1u64 << (self.parent.size() - self.base.count_ones() as usize)
    }

    pub fn members(&self) -> impl Iterator<Item = Subset> {
        self.base().supersets()
    }

    pub fn to_family(&self) -> Result<SubsetFamily, SetfamError> {
        ensure_materializable(self.parent)?;
        SubsetFamily::new(self.parent, self.members())
    }
}

/// A principal ultrafilter `{ J : point ∈ J }`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Ultrafilter {
    #[serde(skip)]
    parent: IndexSet,
    point: usize,
}

impl Ultrafilter {
    pub fn new(parent: IndexSet, point: usize) -> Result<Self, SetfamError> {
        if point >= parent.size() {
            return Err(SetfamError::ElementOutOfRange { element: point, size: parent.size() });
        }
        Ok(Ultrafilter { parent, point })
    }

    pub fn parent(&self) -> IndexSet {
        self.parent
    }

    pub fn point(&self) -> usize {
        self.point
    }

    pub fn contains(&self, s: Subset) -> bool {
        s.parent == self.parent && s.contains(self.point)
    }

    pub fn as_filter(&self) -> Filter {
        Filter { parent: self.parent, base: 1 << self.point }
    }
}

/// The smallest filter containing every member of `family`. The empty
/// family closes to the trivial filter.
pub fn close_to_filter(family: &SubsetFamily) -> Filter {
    let base = family.iter().fold(family.parent.full_mask(), |acc, s| acc & s.mask);
    Filter { parent: family.parent, base }
}

/// A proper filter with `J ∈ f` or `I − J ∈ f` for every subset `J`.
pub fn is_ultrafilter(f: &Filter) -> bool {
    f.is_proper()
        && f.parent
            .power_set()
        .all(|j| f.contains(j) || f.contains(j.complement()))
}

/// The unique set of ultrafilters whose intersection is `f`, in point order.
/// The improper filter decomposes into the empty set.
pub fn decompose_filter(f: &Filter) -> Vec<Ultrafilter> {
    f.base()
        .elements()
        .into_iter()
        .map(|point| Ultrafilter { parent: f.parent, point })
        .collect()
}

/// Intersection of a set of ultrafilters, as a filter. The empty
/// intersection is the improper filter.
pub fn intersect_ultrafilters(parent: IndexSet, ultras: &[Ultrafilter]) -> Filter {
    let base = ultras.iter().fold(0u32, |acc, u| acc | (1 << u.point));
    Filter { parent, base }
}

/// An ordered partition `J_0, .., J_n` of the index set; blocks may be empty.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OrderedPartition {
    pub blocks: Vec<Subset>,
}

impl OrderedPartition {
    /// Builds the partition from a block assignment `I -> {0..n}`.
    pub fn from_assignment(parent: IndexSet, assignment: &[usize], blocks: usize) -> Self {
        let mut masks = vec![0u32; blocks];
        for (i, &b) in assignment.iter().enumerate() {
            masks[b] |= 1 << i;
        }
        OrderedPartition {
            blocks: masks.into_iter().map(|mask| Subset { parent, mask }).collect(),
        }
    }
}

/// Checks whether every partition of `I` into `n + 1` possibly empty blocks
/// has a block whose complement lies in `f`.
///
/// A block's complement lies in `f` exactly when the block misses the base,
/// so only the placement of base points matters; other points are put in the
/// last block. The search over base-point placements is exhaustive and prunes
/// branches that can no longer cover every block.
pub fn check_bdd(f: &Filter, n: usize) -> Check<OrderedPartition> {
    let base = f.base().elements();
    let blocks = n + 1;
    if base.len() < blocks {
        return Check::Holds;
    }
    let mut placement = vec![0usize; base.len()];
    let mut hits = vec![0usize; blocks];
    if !cover_all_blocks(&mut placement, &mut hits, 0, blocks) {
        return Check::Holds;
    }
    let size = f.parent.size();
    let mut assignment = vec![n; size];
    for (k, &point) in base.iter().enumerate() {
        assignment[point] = placement[k];
    }
    Check::Fails(OrderedPartition::from_assignment(f.parent, &assignment, blocks))
}

/// Depth-first search for a placement of base points hitting every block.
fn cover_all_blocks(placement: &mut [usize], hits: &mut [usize], depth: usize, blocks: usize) -> bool {
    let uncovered = hits.iter().filter(|&&h| h == 0).count();
    if depth == placement.len() {
        return uncovered == 0;
    }
    if placement.len() - depth < uncovered {
        return false;
    }
    for b in 0..blocks {
        placement[depth] = b;
        hits[b] += 1;
        if cover_all_blocks(placement, hits, depth + 1, blocks) {
            return true;
        }
        hits[b] -= 1;
    }
    false
}

/// The least `n` for which [`check_bdd`] holds.
pub fn least_bdd_n(f: &Filter) -> usize {
    (0..).find(|&n| check_bdd(f, n).holds()).expect("check_bdd holds once n reaches |base|")
}

/// The grill: subsets lying in at least one ultrafilter of the decomposition.
pub fn grill_of(f: &Filter) -> Result<SubsetFamily, SetfamError> {
    ensure_materializable(f.parent)?;
    let ultras = decompose_filter(f);
    SubsetFamily::new(
        f.parent,
        f.parent.power_set().filter(|j| ultras.iter().any(|u| u.contains(*j))),
    )
}

/// The ideal of sets: subsets outside every ultrafilter of the decomposition,
/// i.e. complements of members of `f`.
pub fn ideal_of(f: &Filter) -> Result<SubsetFamily, SetfamError> {
    ensure_materializable(f.parent)?;
    let ultras = decompose_filter(f);
    SubsetFamily::new(
        f.parent,
        f.parent.power_set().filter(|j| ultras.iter().all(|u| !u.contains(*j))),
    )
}

/// The co-filter: subsets that are not members of `f`.
pub fn cofilter_of(f: &Filter) -> Result<SubsetFamily, SetfamError> {
    ensure_materializable(f.parent)?;
    SubsetFamily::new(f.parent, f.parent.power_set().filter(|j| !f.contains(*j)))
}

/// Input document describing a filter by a list of sets.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FilterDoc {
    pub index_size: usize,
    pub sets: Vec<Vec<usize>>,
    #[serde(default)]
    pub close: bool,
}

impl FilterDoc {
    /// Closes the listed sets to a filter, or, when `close` is false,
    /// requires them to already form one.
    pub fn to_filter(&self) -> Result<Filter, SetfamError> {
        let parent = IndexSet::new(self.index_size)?;
        let family = SubsetFamily::from_lists(parent, &self.sets)?;
        if self.close {
            Ok(close_to_filter(&family))
        } else {
            Filter::try_from_family(&family)
        }
    }

    pub fn from_filter(f: &Filter) -> FilterDoc {
        FilterDoc {
            index_size: f.parent.size(),
            sets: vec![f.base().elements()],
            close: true,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn i3() -> IndexSet {
        IndexSet::new(3).unwrap()
    }

    fn fam(parent: IndexSet, lists: &[&[usize]]) -> SubsetFamily {
        let lists: Vec<Vec<usize>> = lists.iter().map(|l| l.to_vec()).collect();
        SubsetFamily::from_lists(parent, &lists).unwrap()
    }

    /// Brute-force closure: iterate upward closure and pairwise intersection
    /// over the whole power set until nothing changes.
    fn closure_oracle(family: &SubsetFamily) -> BTreeSet<u32> {
        let parent = family.parent();
        let mut set: BTreeSet<u32> = family.iter().map(|s| s.mask()).collect();
        set.insert(parent.full_mask());
        loop {
            let mut next = set.clone();
            for &a in &set {
                for &b in &set {
                    next.insert(a & b);
                }
                for s in parent.power_set() {
                    if a & !s.mask() == 0 {
                        next.insert(s.mask());
                    }
                }
            }
            if next == set {
                return set;
            }
            set = next;
        }
    }

    #[test]
    fn close_examples() {
        let p = i3();
        let f = close_to_filter(&fam(p, &[&[0, 1, 2]]));
        assert_eq!(f.base().elements(), vec![0, 1, 2]);
        assert_eq!(f.to_family().unwrap().len(), 1);

        let f = close_to_filter(&fam(p, &[&[]]));
        assert!(!f.is_proper());
        assert_eq!(f.to_family().unwrap().len(), 8);

        let input = fam(p, &[&[0, 1], &[1, 2]]);
        let f = close_to_filter(&input);
        assert_eq!(f.base().elements(), vec![1]);
        let members: BTreeSet<u32> = f.members().map(|s| s.mask()).collect();
        assert_eq!(members, closure_oracle(&input));
        assert_eq!(members, [0b010, 0b011, 0b110, 0b111].into_iter().collect());

        let f = close_to_filter(&SubsetFamily::empty(p));
        assert_eq!(f, Filter::trivial(p));
    }

    #[test]
    fn is_filter_examples() {
        let p = i3();
        let v = is_filter(&fam(p, &[&[0, 1, 2], &[0, 1], &[1, 2]]));
        match v {
            Check::Fails(FilterViolation::NotClosedUnderIntersection { missing, .. }) => {
                assert_eq!(missing.elements(), vec![1])
            }
            other => panic!("unexpected {other:?}"),
        }
        let up: Vec<Subset> = p.singleton(1).unwrap().supersets().collect();
        assert!(is_filter(&SubsetFamily::new(p, up).unwrap()).holds());
        assert_eq!(is_filter(&SubsetFamily::empty(p)), Check::Fails(FilterViolation::MissingTop));
        let v = is_filter(&fam(p, &[&[0, 1, 2], &[0]]));
        assert!(matches!(v, Check::Fails(FilterViolation::NotUpwardClosed { .. })));
    }

    #[test]
    fn ultrafilter_examples() {
        let p = i3();
        assert!(is_ultrafilter(&Filter::principal(p.subset_of(&[1]).unwrap())));
        assert!(!is_ultrafilter(&Filter::principal(p.subset_of(&[0, 2]).unwrap())));
        assert!(!is_ultrafilter(&Filter::improper(p)));
    }

    #[test]
    fn decompose_examples() {
        let p = i3();
        let f = Filter::principal(p.subset_of(&[0, 2]).unwrap());
        let u = decompose_filter(&f);
        assert_eq!(u.iter().map(|u| u.point()).collect::<Vec<_>>(), vec![0, 2]);
        // Membership-level intersection of the two principal ultrafilters.
        for j in p.power_set() {
            assert_eq!(f.contains(j), u.iter().all(|u| u.contains(j)));
        }
        assert!(decompose_filter(&Filter::improper(p)).is_empty());
        assert_eq!(decompose_filter(&Filter::principal(p.singleton(1).unwrap())).len(), 1);
    }

    /// Enumerates every function I -> {0..n}.
    fn bdd_oracle(f: &Filter, n: usize) -> bool {
        let size = f.parent().size();
        let blocks = n + 1;
        let total = blocks.pow(size as u32);
        (0..total).all(|mut code| {
            let mut masks = vec![0u32; blocks];
            for i in 0..size {
                masks[code % blocks] |= 1 << i;
                code /= blocks;
            }
            masks
                .into_iter()
                .any(|m| f.contains(Subset { parent: f.parent(), mask: m }.complement()))
        })
    }

    #[test]
    fn bdd_examples() {
        let p = i3();
        let f = Filter::principal(p.subset_of(&[0, 2]).unwrap());
        assert!(check_bdd(&f, 2).holds());
        assert!(bdd_oracle(&f, 2));
        let w = check_bdd(&f, 1).into_witness().unwrap();
        assert!(!bdd_oracle(&f, 1));
        assert_eq!(w.blocks[0].elements(), vec![0]);
        assert_eq!(w.blocks[1].elements(), vec![1, 2]);
        assert!(check_bdd(&Filter::improper(p), 0).holds());

        assert_eq!(least_bdd_n(&f), 2);
        assert_eq!(least_bdd_n(&Filter::principal(p.singleton(1).unwrap())), 1);
        assert_eq!(least_bdd_n(&Filter::improper(p)), 0);
    }

    #[test]
    fn bdd_matches_oracle_small() {
        for size in 1..=4 {
            let p = IndexSet::new(size).unwrap();
            for base in p.power_set() {
                let f = Filter::principal(base);
                for n in 0..=size {
                    let got = check_bdd(&f, n);
                    assert_eq!(got.holds(), bdd_oracle(&f, n), "size {size} base {base} n {n}");
                    if let Check::Fails(w) = got {
                        let union = w.blocks.iter().fold(0, |acc, b| acc | b.mask());
                        assert_eq!(union, p.full_mask());
                        assert!(w.blocks.iter().all(|b| !f.contains(b.complement())));
                    }
                }
            }
        }
    }

    #[test]
    fn set_system_examples() {
        let p2 = IndexSet::new(2).unwrap();
        let g = grill_of(&Filter::trivial(p2)).unwrap();
        assert_eq!(g.len(), 3);
        assert!(!g.contains(p2.empty()));

        let p = i3();
        let ideal = ideal_of(&Filter::principal(p.singleton(1).unwrap())).unwrap();
        let expect: Vec<Subset> = p.power_set().filter(|s| !s.contains(1)).collect();
        assert_eq!(ideal, SubsetFamily::new(p, expect).unwrap());

        assert!(grill_of(&Filter::improper(p)).unwrap().is_empty());
        assert_eq!(cofilter_of(&Filter::trivial(p)).unwrap().len(), 7);
    }

    #[test]
    fn large_index_set_is_capped_for_families() {
        let p = IndexSet::new(20).unwrap();
        assert!(matches!(grill_of(&Filter::trivial(p)), Err(SetfamError::TooLarge { .. })));
        assert_eq!(least_bdd_n(&Filter::trivial(p)), 20);
        assert!(IndexSet::new(25).is_err());
        assert!(IndexSet::new(0).is_err());
    }

    #[test]
    fn filter_doc() {
        let doc: FilterDoc =
            serde_json::from_str(r#"{"index_size": 3, "sets": [[0,1],[1,2]], "close": true}"#).unwrap();
        assert_eq!(doc.to_filter().unwrap().base().elements(), vec![1]);
        let strict = FilterDoc { close: false, ..doc };
        assert!(matches!(strict.to_filter(), Err(SetfamError::NotAFilter(_))));
        let bad: FilterDoc = serde_json::from_str(r#"{"index_size": 3, "sets": [[5]]}"#).unwrap();
        assert!(matches!(bad.to_filter(), Err(SetfamError::ElementOutOfRange { .. })));
    }
}
