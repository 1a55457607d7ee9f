//! Built-in algebras: groups, rings, lattices and small vector spaces.
//!
//! Signatures are fixed per kind so that terms and relations written for one
//! member apply to all of them:
//!
//! * groups: `mul/2`, `inv/1`, `e/0`, tagged with the identity;
//! * rings: `add/2`, `neg/1`, `zero/0`, `mul/2`, tagged with zero;
//! * lattices: `join/2`, `meet/2`;
//! * vector spaces over GF(q): `add/2`, `neg/1`, `zero/0`, `smul0..smul{q-1}/1`.

use crate::gf::GaloisField;
use crate::ualg::{product_algebra, FiniteAlgebra, OpSymbol, Signature, Tags};

pub fn group_signature() -> Signature {
    Signature::new(vec![OpSymbol::new("mul", 2), OpSymbol::new("inv", 1), OpSymbol::new("e", 0)])
        .expect("distinct symbols")
}

pub fn ring_signature() -> Signature {
    Signature::new(vec![
        OpSymbol::new("add", 2),
        OpSymbol::new("neg", 1),
        OpSymbol::new("zero", 0),
        OpSymbol::new("mul", 2),
    ])
    .expect("distinct symbols")
}

pub fn lattice_signature() -> Signature {
    Signature::new(vec![OpSymbol::new("join", 2), OpSymbol::new("meet", 2)]).expect("distinct symbols")
}

pub fn vector_space_signature(q: usize) -> Signature {
    let mut symbols = vec![OpSymbol::new("add", 2), OpSymbol::new("neg", 1), OpSymbol::new("zero", 0)];
    symbols.extend((0..q).map(|s| OpSymbol::new(&format!("smul{s}"), 1)));
    Signature::new(symbols).expect("distinct symbols")
}

fn binary_table(n: usize, f: impl Fn(usize, usize) -> usize) -> Vec<usize> {
    (0..n * n).map(|i| f(i % n, i / n)).collect()
}

/// A group from its multiplication; identity and inverses are derived.
pub fn group_from_mul(name: &str, n: usize, mul: impl Fn(usize, usize) -> usize) -> FiniteAlgebra {
    let table = binary_table(n, &mul);
    let e = (0..n).find(|&e| (0..n).all(|x| mul(e, x) == x && mul(x, e) == x)).expect("group identity");
    let inv: Vec<usize> = (0..n).map(|x| (0..n).find(|&y| mul(x, y) == e).expect("group inverse")).collect();
    FiniteAlgebra::new(
        name,
        group_signature(),
        n,
        vec![table, inv, vec![e]],
        Tags { identity: Some(e), zero: None },
    )
    .expect("well-formed group tables")
}

pub fn cyclic_group(n: usize) -> FiniteAlgebra {
    group_from_mul(&format!("Z{n}"), n, |a, b| (a + b) % n)
}

/// A permutation group given by its elements (as image vectors); composition
/// `(p·q)(i) = p(q(i))`.
pub fn permutation_group(name: &str, mut perms: Vec<Vec<usize>>) -> FiniteAlgebra {
    perms.sort();
    let index = |p: &Vec<usize>| perms.binary_search(p).expect("closed under composition");
    let n = perms.len();
    let compose = |a: usize, b: usize| {
        let (p, q) = (&perms[a], &perms[b]);
        index(&q.iter().map(|&i| p[i]).collect())
    };
    group_from_mul(name, n, compose)
}

fn all_permutations(k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in all_permutations(k - 1) {
        for pos in 0..k {
            let mut q = p.clone();
            q.insert(pos, k - 1);
            out.push(q);
        }
    }
    out
}

fn is_even(p: &[usize]) -> bool {
    let inversions = (0..p.len()).flat_map(|i| (i + 1..p.len()).map(move |j| (i, j))).filter(|&(i, j)| p[i] > p[j]).count();
    inversions % 2 == 0
}

/// The symmetric group on `k` points; permutations are ordered
/// lexicographically, so element 0 is the identity.
pub fn symmetric_group(k: usize) -> FiniteAlgebra {
    permutation_group(&format!("S{k}"), all_permutations(k))
}

pub fn alternating_group(k: usize) -> FiniteAlgebra {
    permutation_group(&format!("A{k}"), all_permutations(k).into_iter().filter(|p| is_even(p)).collect())
}

/// The dihedral group of order `2n`: element `r^a s^b` is `a + n·b`.
pub fn dihedral_group(n: usize) -> FiniteAlgebra {
    group_from_mul(&format!("D{n}"), 2 * n, |x, y| {
        let (a, b) = (x % n, x / n);
        let (c, d) = (y % n, y / n);
        // s r^c = r^{-c} s
        let rot = if b == 0 { (a + c) % n } else { (a + n - c) % n };
        rot + n * ((b + d) % 2)
    })
}

/// The quaternion group {±1, ±i, ±j, ±k}: element `sign·4 + unit` with
/// units 1, i, j, k.
pub fn quaternion_group() -> FiniteAlgebra {
    // unit products: (result unit, sign flip)
    let table = [
        [(0, false), (1, false), (2, false), (3, false)],
        [(1, false), (0, true), (3, false), (2, true)],
        [(2, false), (3, true), (0, true), (1, false)],
        [(3, false), (2, false), (1, true), (0, true)],
    ];
    group_from_mul("Q8", 8, |x, y| {
        let (sx, ux) = (x / 4, x % 4);
        let (sy, uy) = (y / 4, y % 4);
        let (u, flip) = table[ux][uy];
        let sign = (sx + sy + flip as usize) % 2;
        sign * 4 + u
    })
}

/// Direct product of algebras sharing a signature.
pub fn direct_product(factors: &[FiniteAlgebra]) -> FiniteAlgebra {
    let sig = factors[0].signature().clone();
    product_algebra(&sig, factors).expect("small product").0
}

/// A ring from addition and multiplication; zero and negation are derived.
pub fn ring_from_ops(
    name: &str,
    n: usize,
    add: impl Fn(usize, usize) -> usize,
    mul: impl Fn(usize, usize) -> usize,
) -> FiniteAlgebra {
    let add_table = binary_table(n, &add);
    let zero = (0..n).find(|&z| (0..n).all(|x| add(z, x) == x)).expect("additive identity");
    let neg: Vec<usize> = (0..n).map(|x| (0..n).find(|&y| add(x, y) == zero).expect("additive inverse")).collect();
    FiniteAlgebra::new(
        name,
        ring_signature(),
        n,
        vec![add_table, neg, vec![zero], binary_table(n, mul)],
        Tags { identity: None, zero: Some(zero) },
    )
    .expect("well-formed ring tables")
}

/// The ring Z/nZ.
pub fn zn_ring(n: usize) -> FiniteAlgebra {
    ring_from_ops(&format!("Z/{n}"), n, |a, b| (a + b) % n, |a, b| (a * b) % n)
}

/// Z/nZ with identically zero multiplication.
pub fn zero_ring(n: usize) -> FiniteAlgebra {
    ring_from_ops(&format!("0Z/{n}"), n, |a, b| (a + b) % n, |_, _| 0)
}

/// GF(q) as a ring.
pub fn field_ring(q: u64) -> FiniteAlgebra {
    let f = GaloisField::new(q).expect("supported field order");
    ring_from_ops(&format!("F{q}"), f.order(), |a, b| f.add(a, b), |a, b| f.mul(a, b))
}

/// F_p[t]/(t^k): element `Σ c_i t^i` encoded base p with `c_0` least significant.
pub fn truncated_polynomial_ring(p: usize, k: u32) -> FiniteAlgebra {
    let n = p.pow(k);
    let digits = move |mut e: usize| -> Vec<usize> {
        (0..k)
            .map(|_| {
                let d = e % p;
                e /= p;
                d
            })
            .collect()
    };
    let encode = move |c: &[usize]| c.iter().rev().fold(0, |acc, &d| acc * p + d);
    ring_from_ops(
        &format!("F{p}[t]/t^{k}"),
        n,
        move |a, b| {
            let s: Vec<usize> = digits(a).iter().zip(digits(b)).map(|(x, y)| (x + y) % p).collect();
            encode(&s)
        },
        move |a, b| {
            let (da, db) = (digits(a), digits(b));
            let mut out = vec![0; k as usize];
            for i in 0..k as usize {
                for j in 0..k as usize - i {
                    out[i + j] = (out[i + j] + da[i] * db[j]) % p;
                }
            }
            encode(&out)
        },
    )
}

/// Upper triangular 2×2 matrices over F2: bits (a, b, d) of [[a, b], [0, d]].
pub fn upper_triangular_f2() -> FiniteAlgebra {
    let split = |x: usize| (x & 1, (x >> 1) & 1, (x >> 2) & 1);
    let join = |a: usize, b: usize, d: usize| a | (b << 1) | (d << 2);
    ring_from_ops(
        "UT2(F2)",
        8,
        |x, y| x ^ y,
        move |x, y| {
            let (a, b, d) = split(x);
            let (e, f, h) = split(y);
            join(a & e, (a & f) ^ (b & h), d & h)
        },
    )
}

/// Strictly upper triangular 3×3 matrices over F2: bits (a12, a13, a23).
pub fn strictly_upper_f2() -> FiniteAlgebra {
    let split = |x: usize| (x & 1, (x >> 1) & 1, (x >> 2) & 1);
    ring_from_ops(
        "N3(F2)",
        8,
        |x, y| x ^ y,
        move |x, y| {
            let (a12, _, _) = split(x);
            let (_, _, b23) = split(y);
            // Only the (1,3) entry survives: a12·b23.
            (a12 & b23) << 1
        },
    )
}

/// The chain 0 < 1 < .. < n-1.
pub fn chain_lattice(n: usize) -> FiniteAlgebra {
    FiniteAlgebra::new(
        &format!("C{n}"),
        lattice_signature(),
        n,
        vec![binary_table(n, |a, b| a.max(b)), binary_table(n, |a, b| a.min(b))],
        Tags::default(),
    )
    .expect("well-formed lattice tables")
}

/// The Boolean lattice of subsets of a `k`-set.
pub fn boolean_lattice(k: u32) -> FiniteAlgebra {
    let n = 1usize << k;
    FiniteAlgebra::new(
        &format!("B{k}"),
        lattice_signature(),
        n,
        vec![binary_table(n, |a, b| a | b), binary_table(n, |a, b| a & b)],
        Tags::default(),
    )
    .expect("well-formed lattice tables")
}

fn lattice_from_order(name: &str, n: usize, leq: impl Fn(usize, usize) -> bool) -> FiniteAlgebra {
    let join = |a: usize, b: usize| {
        let uppers: Vec<usize> = (0..n).filter(|&u| leq(a, u) && leq(b, u)).collect();
        *uppers.iter().find(|&&u| uppers.iter().all(|&v| leq(u, v))).expect("least upper bound")
    };
    let meet = |a: usize, b: usize| {
        let lowers: Vec<usize> = (0..n).filter(|&l| leq(l, a) && leq(l, b)).collect();
        *lowers.iter().find(|&&l| lowers.iter().all(|&v| leq(v, l))).expect("greatest lower bound")
    };
    FiniteAlgebra::new(name, lattice_signature(), n, vec![binary_table(n, join), binary_table(n, meet)], Tags::default())
        .expect("well-formed lattice tables")
}

/// M3: bottom 0, atoms 1, 2, 3, top 4.
pub fn diamond_lattice() -> FiniteAlgebra {
    lattice_from_order("M3", 5, |a, b| a == b || a == 0 || b == 4)
}

/// N5: 0 < 1 < 2 < 4 and 0 < 3 < 4.
pub fn pentagon_lattice() -> FiniteAlgebra {
    lattice_from_order("N5", 5, |a, b| {
        a == b || a == 0 || b == 4 || (a == 1 && b == 2)
    })
}

/// GF(q) as a one-dimensional vector space over itself.
pub fn field_line(q: u64) -> FiniteAlgebra {
    let f = GaloisField::new(q).expect("supported field order");
    let n = f.order();
    let mut tables = vec![
        binary_table(n, |a, b| f.add(a, b)),
        (0..n).map(|a| f.neg(a)).collect(),
        vec![0],
    ];
    tables.extend((0..n).map(|s| (0..n).map(|a| f.mul(s, a)).collect::<Vec<_>>()));
    FiniteAlgebra::new(
        &format!("F{q}-line"),
        vector_space_signature(n),
        n,
        tables,
        Tags { identity: None, zero: Some(0) },
    )
    .expect("well-formed vector space tables")
}

/// Every group of order at most 8, up to isomorphism.
pub fn groups_up_to_order_8() -> Vec<FiniteAlgebra> {
    vec![
        cyclic_group(1),
        cyclic_group(2),
        cyclic_group(3),
        cyclic_group(4),
        direct_product(&[cyclic_group(2), cyclic_group(2)]),
        cyclic_group(5),
        cyclic_group(6),
        symmetric_group(3),
        cyclic_group(7),
        cyclic_group(8),
        direct_product(&[cyclic_group(4), cyclic_group(2)]),
        direct_product(&[cyclic_group(2), cyclic_group(2), cyclic_group(2)]),
        dihedral_group(4),
        quaternion_group(),
    ]
}

/// Rings with at most 8 elements used by the almost-direct-factor suites.
pub fn rings_up_to_8() -> Vec<FiniteAlgebra> {
    let mut rings: Vec<FiniteAlgebra> = (1..=8).map(zn_ring).collect();
    rings.extend([2, 3, 4].map(zero_ring));
    rings.extend([
        field_ring(4),
        field_ring(8),
        direct_product(&[zero_ring(2), zero_ring(2)]),
        direct_product(&[field_ring(2), field_ring(2)]),
        direct_product(&[field_ring(2), zero_ring(2)]),
        direct_product(&[field_ring(2), field_ring(2), field_ring(2)]),
        direct_product(&[field_ring(2), zn_ring(4)]),
        direct_product(&[field_ring(2), zero_ring(4)]),
        truncated_polynomial_ring(2, 2),
        truncated_polynomial_ring(2, 3),
        upper_triangular_f2(),
        strictly_upper_f2(),
    ]);
    rings
}

/// Lattices with at most 6 elements.
pub fn small_lattices() -> Vec<FiniteAlgebra> {
    vec![
        chain_lattice(1),
        chain_lattice(2),
        chain_lattice(3),
        chain_lattice(4),
        boolean_lattice(2),
        chain_lattice(5),
        diamond_lattice(),
        pentagon_lattice(),
        direct_product(&[chain_lattice(2), chain_lattice(3)]),
    ]
}

/// Resolves a built-in algebra by name, e.g. `Z4`, `S3`, `F2`, `Z/6`,
/// `0Z/2`, `C3`, `B2`, `M3`, `N5`, `Q8`, `D4`, `A5`, `F3-line`.
pub fn builtin(name: &str) -> Option<FiniteAlgebra> {
    let num = |s: &str| s.parse::<usize>().ok().filter(|&n| n >= 1);
    let alg = match name {
        "Q8" => quaternion_group(),
        "M3" => diamond_lattice(),
        "N5" => pentagon_lattice(),
        "UT2(F2)" => upper_triangular_f2(),
        "N3(F2)" => strictly_upper_f2(),
        _ => {
            if let Some(rest) = name.strip_suffix("-line") {
                let q = rest.strip_prefix('F').and_then(num)?;
                GaloisField::new(q as u64).ok()?;
                return Some(field_line(q as u64));
            }
            if let Some(n) = name.strip_prefix("0Z/").and_then(num) {
                return Some(zero_ring(n));
            }
            if let Some(n) = name.strip_prefix("Z/").and_then(num) {
                return Some(zn_ring(n));
            }
            let (head, tail) = name.split_at(name.find(|c: char| c.is_ascii_digit())?);
            let n = num(tail)?;
            match head {
                "Z" if n <= 64 => cyclic_group(n),
                "S" if n <= 5 => symmetric_group(n),
                "A" if n <= 5 => alternating_group(n),
                "D" if (1..=32).contains(&n) => dihedral_group(n),
                "F" => {
                    GaloisField::new(n as u64).ok()?;
                    field_ring(n as u64)
                }
                "C" if n <= 64 => chain_lattice(n),
                "B" if n <= 6 => boolean_lattice(n as u32),
                _ => return None,
            }
        }
    };
    Some(alg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ualg::{is_identity, parse_equation};

    fn satisfies(a: &FiniteAlgebra, eq: &str) -> bool {
        let (l, r) = parse_equation(eq, a.signature()).unwrap();
        is_identity(a, &l, &r).unwrap().holds()
    }

    const GROUP_AXIOMS: [&str; 3] = ["mul(mul(x,y),z0) = mul(x,mul(y,z0))", "mul(e,x) = x", "mul(x,inv(x)) = e"];
    const RING_AXIOMS: [&str; 6] = [
        "add(add(x,y),z0) = add(x,add(y,z0))",
        "add(x,y) = add(y,x)",
        "add(zero,x) = x",
        "add(x,neg(x)) = zero",
        "mul(x,add(y,z0)) = add(mul(x,y),mul(x,z0))",
        "mul(add(x,y),z0) = add(mul(x,z0),mul(y,z0))",
    ];

    #[test]
    fn groups_satisfy_axioms() {
        let groups = groups_up_to_order_8();
        let orders: Vec<usize> = groups.iter().map(|g| g.size()).collect();
        assert_eq!(orders, vec![1, 2, 3, 4, 4, 5, 6, 6, 7, 8, 8, 8, 8, 8]);
        for g in groups.iter().chain([&alternating_group(5), &symmetric_group(4)]) {
            for ax in GROUP_AXIOMS {
                assert!(satisfies(g, ax), "{} fails {ax}", g.name());
            }
        }
        assert_eq!(alternating_group(5).size(), 60);
        // D4 and Q8 are nonabelian and not isomorphic: Q8 has one involution.
        let involutions = |g: &FiniteAlgebra| (1..8).filter(|&x| g.apply2(0, x, x) == 0).count();
        assert_eq!(involutions(&dihedral_group(4)), 5);
        assert_eq!(involutions(&quaternion_group()), 1);
    }

    #[test]
    fn rings_satisfy_axioms() {
        for r in rings_up_to_8() {
            for ax in RING_AXIOMS {
                assert!(satisfies(&r, ax), "{} fails {ax}", r.name());
            }
            assert!(satisfies(&r, "mul(mul(x,y),z0) = mul(x,mul(y,z0))"), "{} not associative", r.name());
        }
        assert!(!satisfies(&upper_triangular_f2(), "mul(x,y) = mul(y,x)"));
    }

    #[test]
    fn lattices_satisfy_axioms() {
        for l in small_lattices() {
            for ax in [
                "join(x,meet(x,y)) = x",
                "meet(x,join(x,y)) = x",
                "join(join(x,y),z0) = join(x,join(y,z0))",
                "meet(meet(x,y),z0) = meet(x,meet(y,z0))",
                "join(x,y) = join(y,x)",
                "meet(x,y) = meet(y,x)",
            ] {
                assert!(satisfies(&l, ax), "{} fails {ax}", l.name());
            }
        }
        assert!(!satisfies(&pentagon_lattice(), "meet(x,join(y,z0)) = join(meet(x,y),meet(x,z0))"));
    }

    #[test]
    fn builtin_names() {
        assert_eq!(builtin("S3").unwrap().size(), 6);
        assert_eq!(builtin("Z/6").unwrap().name(), "Z/6");
        assert_eq!(builtin("F4").unwrap().size(), 4);
        assert_eq!(builtin("F3-line").unwrap().size(), 3);
        assert!(builtin("F6").is_none());
        assert!(builtin("nonsense").is_none());
    }
}
