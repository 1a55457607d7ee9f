use std::fmt;

use serde::Serialize;

use super::{FiniteAlgebra, HomTable, UalgError};
use crate::check::Check;

/// Largest carrier for which every congruence is enumerated.
pub const CONGRUENCE_ENUMERATION_CAP: usize = 8;

/// An equivalence relation on a carrier, stored as a block label per element.
/// Labels are numbered in order of first occurrence.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Congruence {
    labels: Vec<usize>,
    block_count: usize,
}

impl Congruence {
    /// Canonicalizes arbitrary labels.
    pub fn from_labels(raw: &[usize]) -> Congruence {
        let mut map = std::collections::HashMap::new();
        let labels: Vec<usize> = raw
            .iter()
            .map(|r| {
                let next = map.len();
                *map.entry(*r).or_insert(next)
            })
            .collect();
        Congruence { labels, block_count: map.len() }
    }

    pub fn from_blocks(size: usize, blocks: &[Vec<usize>]) -> Result<Congruence, UalgError> {
        let mut raw: Vec<usize> = (0..size).map(|i| blocks.len() + i).collect();
        for (b, block) in blocks.iter().enumerate() {
            for &e in block {
                if e >= size {
                    return Err(UalgError::ElementOutOfRange { element: e, size });
                }
                raw[e] = b;
            }
        }
        Ok(Congruence::from_labels(&raw))
    }

    pub fn diagonal(size: usize) -> Congruence {
        Congruence { labels: (0..size).collect(), block_count: size }
    }

    pub fn full(size: usize) -> Congruence {
        Congruence { labels: vec![0; size], block_count: 1.min(size) }
    }

    pub fn size(&self) -> usize {
        self.labels.len()
    }

    pub fn block_count(&self) -> usize {
        self.block_count
    }

    pub fn block_of(&self, element: usize) -> usize {
        self.labels[element]
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn related(&self, a: usize, b: usize) -> bool {
        self.labels[a] == self.labels[b]
    }

    pub fn blocks(&self) -> Vec<Vec<usize>> {
        let mut blocks = vec![Vec::new(); self.block_count];
        for (e, &l) in self.labels.iter().enumerate() {
            blocks[l].push(e);
        }
        blocks
    }

    /// All related pairs, in lexicographic order.
    pub fn pairs(&self) -> Vec<(usize, usize)> {
        let n = self.size();
        (0..n)
            .flat_map(|a| (0..n).map(move |b| (a, b)))
            .filter(|&(a, b)| self.related(a, b))
            .collect()
    }

    /// Checks that related arguments give related results in every operation.
    /// It suffices to vary one argument position at a time.
    pub fn is_compatible(&self, a: &FiniteAlgebra) -> Check<CompatibilityWitness> {
        let n = self.size();
        for t in translations(a) {
            for u in 0..n {
                for v in u + 1..n {
                    let (fu, fv) = (t.images[u], t.images[v]);
                    if self.related(u, v) && !self.related(fu, fv) {
                        return Check::Fails(CompatibilityWitness {
                            symbol: a.signature().symbols()[t.op].name.clone(),
                            position: t.position,
                            fixed: t.fixed,
                            related: (u, v),
                            images: (fu, fv),
                        });
                    }
                }
            }
        }
        Check::Holds
    }
}

/// An operation sending related arguments to unrelated results.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CompatibilityWitness {
    pub symbol: String,
    /// Argument position that varies.
    pub position: usize,
    /// The full argument tuple with the varying position set to 0.
    pub fixed: Vec<usize>,
    pub related: (usize, usize),
    pub images: (usize, usize),
}

impl fmt::Display for CompatibilityWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} at argument {} sends related {:?} to unrelated {:?}",
            self.symbol, self.position, self.related, self.images
        )
    }
}

/// A one-step translation `u ↦ op(a_0, .., u, .., a_{k-1})`.
struct Translation {
    op: usize,
    position: usize,
    /// Argument tuple with the varying position set to 0.
    fixed: Vec<usize>,
    images: Vec<usize>,
}

fn translations(a: &FiniteAlgebra) -> Vec<Translation> {
    let n = a.size();
    let mut out = Vec::new();
    for (op, sym) in a.signature().symbols().iter().enumerate() {
        let k = sym.arity;
        if k == 0 {
            continue;
        }
        let mut args = vec![0usize; k];
        for position in 0..k {
            for code in 0..n.pow(k as u32 - 1) {
                let mut rest = code;
                for (j, slot) in args.iter_mut().enumerate() {
                    if j == position {
                        *slot = 0;
                    } else {
                        *slot = rest % n;
                        rest /= n;
                    }
                }
                let fixed = args.clone();
                let images = (0..n)
                    .map(|u| {
                        args[position] = u;
                        a.apply(op, &args)
                    })
                    .collect();
                out.push(Translation { op, position, fixed, images });
            }
        }
    }
    out
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect() }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
        self.parent[hi] = lo;
        true
    }
}

/// The smallest congruence containing `pairs`: merge each pair, and push the
/// images of every merged pair under every one-step translation, until no
/// merge happens.
pub fn congruence_generated(a: &FiniteAlgebra, pairs: &[(usize, usize)]) -> Result<Congruence, UalgError> {
    let n = a.size();
    for &(u, v) in pairs {
        a.check_element(u)?;
        a.check_element(v)?;
    }
    let mut uf = UnionFind::new(n);
    let mut queue: Vec<(usize, usize)> = pairs.to_vec();
    let translations = unary_translations(a);
    while let Some((u, v)) = queue.pop() {
        if !uf.union(u, v) {
            continue;
        }
        for t in &translations {
            if t[u] != t[v] {
                queue.push((t[u], t[v]));
            }
        }
    }
    let raw: Vec<usize> = (0..n).map(|e| uf.find(e)).collect();
    Ok(Congruence::from_labels(&raw))
}

/// All one-step translations as lookup tables, deduplicated.
fn unary_translations(a: &FiniteAlgebra) -> Vec<Vec<usize>> {
    let set: std::collections::BTreeSet<Vec<usize>> = translations(a).into_iter().map(|t| t.images).collect();
    set.into_iter().collect()
}

/// Enumerates every congruence of `a` by filtering all set partitions of the
/// carrier (restricted growth strings) for compatibility.
pub fn all_congruences(a: &FiniteAlgebra) -> Result<Vec<Congruence>, UalgError> {
    let n = a.size();
    if n > CONGRUENCE_ENUMERATION_CAP {
        return Err(UalgError::TooLarge {
            what: "congruence enumeration carrier",
            size: n as u64,
            cap: CONGRUENCE_ENUMERATION_CAP as u64,
        });
    }
    let mut out = Vec::new();
    let mut rgs = vec![0usize; n];
    loop {
        let c = Congruence::from_labels(&rgs);
        if c.is_compatible(a).holds() {
            out.push(c);
        }
        // Next restricted growth string.
        let mut i = n;
        loop {
            if i <= 1 {
                return Ok(out);
            }
            i -= 1;
            let max_prefix = rgs[..i].iter().copied().max().unwrap_or(0);
            if rgs[i] <= max_prefix {
                rgs[i] += 1;
                for r in rgs[i + 1..].iter_mut() {
                    *r = 0;
                }
                break;
            }
        }
    }
}

/// The quotient algebra on the blocks of `c`, with the projection onto it.
pub fn quotient_algebra(a: &FiniteAlgebra, c: &Congruence) -> Result<(FiniteAlgebra, HomTable), UalgError> {
    if c.size() != a.size() {
        return Err(UalgError::MapLength { expected: a.size(), found: c.size() });
    }
    if let Check::Fails(w) = c.is_compatible(a) {
        return Err(UalgError::NotCompatible(w));
    }
    let blocks = c.blocks();
    let reps: Vec<usize> = blocks.iter().map(|b| b[0]).collect();
    let m = blocks.len();
    let mut tables = Vec::new();
    for (op, sym) in a.signature().symbols().iter().enumerate() {
        let len = m.pow(sym.arity as u32);
        let mut args = vec![0usize; sym.arity];
        let table = (0..len)
            .map(|index| {
                let mut rest = index;
                for slot in args.iter_mut() {
                    *slot = reps[rest % m];
                    rest /= m;
                }
                c.block_of(a.apply(op, &args))
            })
            .collect();
        tables.push(table);
    }
    let tags = super::Tags {
        identity: a.tags().identity.map(|e| c.block_of(e)),
        zero: a.tags().zero.map(|e| c.block_of(e)),
    };
    let name = format!("{}/~", a.name());
    let q = FiniteAlgebra::new(&name, a.signature().clone(), m, tables, tags)?;
    let projection = HomTable::new(a.clone(), q.clone(), c.labels().to_vec())?;
    Ok((q, projection))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;

    /// Naive fixpoint: start from the pairs, close under symmetry,
    /// transitivity and one-step translations over the full n×n relation.
    fn generated_oracle(a: &FiniteAlgebra, pairs: &[(usize, usize)]) -> Vec<Vec<bool>> {
        let n = a.size();
        let mut rel = vec![vec![false; n]; n];
        for i in 0..n {
            rel[i][i] = true;
        }
        for &(u, v) in pairs {
            rel[u][v] = true;
        }
        loop {
            let mut changed = false;
            let mut add = |r: &mut Vec<Vec<bool>>, u: usize, v: usize| {
                if !r[u][v] {
                    r[u][v] = true;
                    changed = true;
                }
            };
            for u in 0..n {
                for v in 0..n {
                    if rel[u][v] {
                        add(&mut rel, v, u);
                        for w in 0..n {
                            if rel[v][w] {
                                add(&mut rel, u, w);
                            }
                        }
                    }
                }
            }
            for t in translations(a) {
                for u in 0..n {
                    for v in 0..n {
                        let (fu, fv) = (t.images[u], t.images[v]);
                        if rel[u][v] && !rel[fu][fv] {
                            rel[fu][fv] = true;
                            changed = true;
                        }
                    }
                }
            }
            if !changed {
                return rel;
            }
        }
    }

    #[test]
    fn generated_examples() {
        let z4 = corpus::cyclic_group(4);
        assert_eq!(congruence_generated(&z4, &[]).unwrap(), Congruence::diagonal(4));
        assert_eq!(congruence_generated(&z4, &[(3, 3)]).unwrap(), Congruence::diagonal(4));
        let c = congruence_generated(&z4, &[(0, 2)]).unwrap();
        assert_eq!(c.blocks(), vec![vec![0, 2], vec![1, 3]]);
        let oracle = generated_oracle(&z4, &[(0, 2)]);
        for u in 0..4 {
            for v in 0..4 {
                assert_eq!(c.related(u, v), oracle[u][v]);
            }
        }
    }

    #[test]
    fn generated_matches_oracle_on_s3() {
        let s3 = corpus::symmetric_group(3);
        for u in 0..6 {
            for v in 0..6 {
                let c = congruence_generated(&s3, &[(u, v)]).unwrap();
                let oracle = generated_oracle(&s3, &[(u, v)]);
                for a in 0..6 {
                    for b in 0..6 {
                        assert_eq!(c.related(a, b), oracle[a][b]);
                    }
                }
            }
        }
    }

    #[test]
    fn quotient_examples() {
        let z4 = corpus::cyclic_group(4);
        let (q, proj) = quotient_algebra(&z4, &Congruence::diagonal(4)).unwrap();
        assert_eq!(q.size(), 4);
        assert_eq!(proj.map(), &[0, 1, 2, 3]);
        let (q, _) = quotient_algebra(&z4, &Congruence::full(4)).unwrap();
        assert_eq!(q.size(), 1);
        let c = Congruence::from_blocks(4, &[vec![0, 2], vec![1, 3]]).unwrap();
        let (q, _) = quotient_algebra(&z4, &c).unwrap();
        let z2 = corpus::cyclic_group(2);
        for op in 0..q.signature().symbols().len() {
            assert_eq!(q.table(op), z2.table(op));
        }
    }

    #[test]
    fn incompatible_partition_rejected() {
        let z4 = corpus::cyclic_group(4);
        let c = Congruence::from_blocks(4, &[vec![0, 1]]).unwrap();
        assert!(matches!(quotient_algebra(&z4, &c), Err(UalgError::NotCompatible(_))));
    }

    #[test]
    fn congruences_of_small_algebras() {
        // Z4 has three congruences, S3 has three (normal subgroups 1, A3, S3).
        assert_eq!(all_congruences(&corpus::cyclic_group(4)).unwrap().len(), 3);
        assert_eq!(all_congruences(&corpus::symmetric_group(3)).unwrap().len(), 3);
        // Every partition of a 3-chain lattice into intervals compatible with
        // join/meet: 4 congruences.
        assert_eq!(all_congruences(&corpus::chain_lattice(3)).unwrap().len(), 4);
    }
}
