//! Finite universal algebras given by operation tables.
//!
//! Operation tables are flat arrays indexed little-endian mixed radix: the
//! entry for arguments `(a_0, .., a_{k-1})` sits at `Σ a_j · size^j`.

mod congruence;
mod hom;
mod product;
mod term;

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::check::Check;

pub use congruence::{
    all_congruences, congruence_generated, quotient_algebra, CompatibilityWitness, Congruence,
};
pub use hom::{check_hom_law, HomLawWitness, HomTable};
pub use product::{product_algebra, TupleCodec, PRODUCT_TABLE_CAP};
pub use term::{parse_equation, parse_term, ParseError, ParseErrorKind, Term, Var};

/// Largest number of assignments an identity sweep will visit.
pub const ASSIGNMENT_CAP: u64 = 1 << 26;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum UalgError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("symbol `{0}` is not in the signature")]
    UnknownSymbol(String),
    #[error("symbol `{0}` appears twice in the signature")]
    DuplicateSymbol(String),
    #[error("variable {0} is unbound")]
    UnboundVariable(Var),
    #[error("signatures differ")]
    SignatureMismatch,
    #[error("algebra carrier must be nonempty")]
    EmptyCarrier,
    #[error("table of `{symbol}` has {found} entries, expected {expected}")]
    TableLength { symbol: String, expected: usize, found: usize },
    #[error("table of `{symbol}` has value {value} at position {position}, outside carrier of size {size}")]
    EntryOutOfRange { symbol: String, position: usize, value: usize, size: usize },
    #[error("tag `{tag}` = {value} lies outside carrier of size {size}")]
    TagOutOfRange { tag: &'static str, value: usize, size: usize },
    #[error("element {element} outside carrier of size {size}")]
    ElementOutOfRange { element: usize, size: usize },
    #[error("{what} of size {size} exceeds the cap {cap}")]
    TooLarge { what: &'static str, size: u64, cap: u64 },
    #[error("partition is not compatible with the operations: {0}")]
    NotCompatible(CompatibilityWitness),
    #[error("map is not a homomorphism: {0}")]
    NotHomomorphism(HomLawWitness),
    #[error("map has {found} entries, expected {expected}")]
    MapLength { expected: usize, found: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct OpSymbol {
    pub name: String,
    pub arity: usize,
}

impl OpSymbol {
    pub fn new(name: &str, arity: usize) -> Self {
        OpSymbol { name: name.to_string(), arity }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Signature {
    symbols: Vec<OpSymbol>,
}

impl Signature {
    pub fn new(symbols: Vec<OpSymbol>) -> Result<Self, UalgError> {
        for (k, s) in symbols.iter().enumerate() {
            if symbols[..k].iter().any(|t| t.name == s.name) {
                return Err(UalgError::DuplicateSymbol(s.name.clone()));
            }
        }
        Ok(Signature { symbols })
    }

    pub fn symbols(&self) -> &[OpSymbol] {
        &self.symbols
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.symbols.iter().position(|s| s.name == name)
    }

    pub fn arity_of(&self, name: &str) -> Option<usize> {
        self.symbols.iter().find(|s| s.name == name).map(|s| s.arity)
    }
}

/// Designated elements used by support, kernel and annihilator computations.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Tags {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub identity: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub zero: Option<usize>,
}

impl Tags {
    /// The zero tag when present, otherwise the identity tag.
    pub fn neutral(&self) -> Option<usize> {
        self.zero.or(self.identity)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FiniteAlgebra {
    name: String,
    signature: Signature,
    size: usize,
    tables: Vec<Vec<usize>>,
    tags: Tags,
}

pub(crate) fn table_len(size: usize, arity: usize) -> Option<usize> {
    size.checked_pow(arity as u32)
}

impl FiniteAlgebra {
    pub fn new(
        name: &str,
        signature: Signature,
        size: usize,
        tables: Vec<Vec<usize>>,
        tags: Tags,
    ) -> Result<Self, UalgError> {
        if size == 0 {
            return Err(UalgError::EmptyCarrier);
        }
        if tables.len() != signature.symbols.len() {
            return Err(UalgError::SignatureMismatch);
        }
        for (sym, table) in signature.symbols.iter().zip(&tables) {
            let expected = table_len(size, sym.arity).ok_or(UalgError::TooLarge {
                what: "operation table",
                size: u64::MAX,
                cap: PRODUCT_TABLE_CAP,
            })?;
            if table.len() != expected {
                return Err(UalgError::TableLength { symbol: sym.name.clone(), expected, found: table.len() });
            }
            if let Some(position) = table.iter().position(|&v| v >= size) {
                return Err(UalgError::EntryOutOfRange {
                    symbol: sym.name.clone(),
                    position,
                    value: table[position],
                    size,
                });
            }
        }
        for (tag, value) in [("identity", tags.identity), ("zero", tags.zero)] {
            if let Some(value) = value {
                if value >= size {
                    return Err(UalgError::TagOutOfRange { tag, value, size });
                }
            }
        }
        Ok(FiniteAlgebra { name: name.to_string(), signature, size, tables, tags })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn renamed(mut self, name: &str) -> Self {
        self.name = name.to_string();
        self
    }

    pub fn signature(&self) -> &Signature {
        &self.signature
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn tags(&self) -> Tags {
        self.tags
    }

    pub fn with_tags(mut self, tags: Tags) -> Result<Self, UalgError> {
        for (tag, value) in [("identity", tags.identity), ("zero", tags.zero)] {
            if let Some(value) = value.filter(|&v| v >= self.size) {
                return Err(UalgError::TagOutOfRange { tag, value, size: self.size });
            }
        }
        self.tags = tags;
        Ok(self)
    }

    pub fn op_index(&self, name: &str) -> Result<usize, UalgError> {
        self.signature.index_of(name).ok_or_else(|| UalgError::UnknownSymbol(name.to_string()))
    }

    pub fn arity(&self, op: usize) -> usize {
        self.signature.symbols[op].arity
    }

    pub fn table(&self, op: usize) -> &[usize] {
        &self.tables[op]
    }

    pub fn apply(&self, op: usize, args: &[usize]) -> usize {
        let mut index = 0;
        for &a in args.iter().rev() {
            index = index * self.size + a;
        }
        self.tables[op][index]
    }

    /// Shorthand for a binary operation looked up by index.
    pub fn apply2(&self, op: usize, a: usize, b: usize) -> usize {
        self.tables[op][a + b * self.size]
    }

    /// A copy with one table entry replaced; used for fault injection.
    pub fn with_entry(&self, op: usize, position: usize, value: usize) -> Result<Self, UalgError> {
        let mut tables = self.tables.clone();
        let sym = &self.signature.symbols[op];
        if position >= tables[op].len() {
            return Err(UalgError::TableLength { symbol: sym.name.clone(), expected: tables[op].len(), found: position + 1 });
        }
        tables[op][position] = value;
        FiniteAlgebra::new(&self.name, self.signature.clone(), self.size, tables, self.tags)
    }

    pub fn check_element(&self, element: usize) -> Result<(), UalgError> {
        if element >= self.size {
            Err(UalgError::ElementOutOfRange { element, size: self.size })
        } else {
            Ok(())
        }
    }

    pub fn to_doc(&self) -> AlgebraDoc {
        AlgebraDoc {
            name: self.name.clone(),
            size: self.size,
            ops: self
                .signature
                .symbols
                .iter()
                .zip(&self.tables)
                .map(|(s, t)| OpDoc { symbol: s.name.clone(), arity: s.arity, table: t.clone() })
                .collect(),
            tags: self.tags,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OpDoc {
    pub symbol: String,
    pub arity: usize,
    pub table: Vec<usize>,
}

/// JSON form of a finite algebra.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlgebraDoc {
    pub name: String,
    pub size: usize,
    pub ops: Vec<OpDoc>,
    #[serde(default)]
    pub tags: Tags,
}

impl AlgebraDoc {
    pub fn to_algebra(&self) -> Result<FiniteAlgebra, UalgError> {
        let signature = Signature::new(
            self.ops.iter().map(|o| OpSymbol { name: o.symbol.clone(), arity: o.arity }).collect(),
        )?;
        let tables = self.ops.iter().map(|o| o.table.clone()).collect();
        FiniteAlgebra::new(&self.name, signature, self.size, tables, self.tags)
    }
}

/// A variable assignment.
pub type Env = BTreeMap<Var, usize>;

#[derive(Debug, Clone, Copy)]
enum Instr {
    Load(usize),
    Apply { op: usize, arity: usize },
}

/// A term compiled against an algebra's signature into a postfix program
/// over numbered variable slots.
#[derive(Debug, Clone)]
pub struct CompiledTerm {
    program: Vec<Instr>,
}

impl CompiledTerm {
    pub fn new(t: &Term, sig: &Signature, slots: &[Var]) -> Result<Self, UalgError> {
        let mut program = Vec::with_capacity(t.node_count());
        compile_into(t, sig, slots, &mut program)?;
        Ok(CompiledTerm { program })
    }

    /// Evaluates with `values[k]` bound to slot `k`. `stack` is scratch space.
    pub fn eval(&self, a: &FiniteAlgebra, values: &[usize], stack: &mut Vec<usize>) -> usize {
        stack.clear();
        for instr in &self.program {
            match *instr {
                Instr::Load(slot) => stack.push(values[slot]),
                Instr::Apply { op, arity } => {
                    let base = stack.len() - arity;
                    let v = a.apply(op, &stack[base..]);
                    stack.truncate(base);
                    stack.push(v);
                }
            }
        }
        stack[0]
    }
}

fn compile_into(t: &Term, sig: &Signature, slots: &[Var], out: &mut Vec<Instr>) -> Result<(), UalgError> {
    match t {
        Term::Var(v) => {
            let slot = slots.iter().position(|s| s == v).ok_or(UalgError::UnboundVariable(*v))?;
            out.push(Instr::Load(slot));
        }
        Term::App { op, args } => {
            let index = sig.index_of(op).ok_or_else(|| UalgError::UnknownSymbol(op.clone()))?;
            let arity = sig.symbols[index].arity;
            if arity != args.len() {
                return Err(UalgError::Parse(ParseError {
                    kind: ParseErrorKind::ArityMismatch { symbol: op.clone(), expected: arity, found: args.len() },
                    position: 0,
                }));
            }
            for a in args {
                compile_into(a, sig, slots, out)?;
            }
            out.push(Instr::Apply { op: index, arity });
        }
    }
    Ok(())
}

/// Evaluates `t` in `a` under `env`.
pub fn eval_term(a: &FiniteAlgebra, t: &Term, env: &Env) -> Result<usize, UalgError> {
    let slots: Vec<Var> = env.keys().copied().collect();
    let values: Vec<usize> = env.values().copied().collect();
    for &v in &values {
        a.check_element(v)?;
    }
    let compiled = CompiledTerm::new(t, &a.signature, &slots)?;
    Ok(compiled.eval(a, &values, &mut Vec::new()))
}

/// Decodes assignment number `code` for `vars` variables over a carrier of
/// `size` elements; the first variable is the most significant digit, so
/// increasing codes are lexicographically increasing assignments.
pub(crate) fn decode_assignment(mut code: u64, size: usize, out: &mut [usize]) {
    for slot in out.iter_mut().rev() {
        *slot = (code % size as u64) as usize;
        code /= size as u64;
    }
}

pub(crate) fn assignment_count(size: usize, vars: usize, what: &'static str) -> Result<u64, UalgError> {
    let total = (size as u64).checked_pow(vars as u32).filter(|&t| t <= ASSIGNMENT_CAP);
    total.ok_or(UalgError::TooLarge { what, size: (size as f64).powi(vars as i32) as u64, cap: ASSIGNMENT_CAP })
}

/// Finds the lexicographically least code in `0..total` satisfying `pred`,
/// splitting large ranges across the rayon pool.
pub(crate) fn find_first_code<F>(total: u64, pred: F) -> Option<u64>
where
    F: Fn(u64) -> bool + Sync,
{
    if total <= 4096 {
        (0..total).find(|&c| pred(c))
    } else {
        (0..total).into_par_iter().find_first(|&c| pred(c))
    }
}

/// Checks whether `lhs = rhs` holds under every assignment; on failure
/// returns the lexicographically least violating assignment.
pub fn is_identity(a: &FiniteAlgebra, lhs: &Term, rhs: &Term) -> Result<Check<Env>, UalgError> {
    let mut vars = lhs.variables();
    vars.extend(rhs.variables());
    let slots: Vec<Var> = vars.into_iter().collect();
    let left = CompiledTerm::new(lhs, &a.signature, &slots)?;
    let right = CompiledTerm::new(rhs, &a.signature, &slots)?;
    let total = assignment_count(a.size, slots.len(), "identity sweep")?;
    let found = find_first_code(total, |code| {
        let mut values = vec![0; slots.len()];
        decode_assignment(code, a.size, &mut values);
        let mut stack = Vec::new();
        left.eval(a, &values, &mut stack) != right.eval(a, &values, &mut stack)
    });
    Ok(Check::from(found.map(|code| {
        let mut values = vec![0; slots.len()];
        decode_assignment(code, a.size, &mut values);
        slots.iter().copied().zip(values).collect()
    })))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;

    fn t(text: &str, a: &FiniteAlgebra) -> Term {
        parse_term(text, a.signature()).unwrap()
    }

    #[test]
    fn eval_examples() {
        let z2 = corpus::cyclic_group(2);
        let env: Env = [(Var::X, 1), (Var::Y, 1)].into_iter().collect();
        assert_eq!(eval_term(&z2, &t("mul(x,y)", &z2), &env).unwrap(), 0);
        let z3 = corpus::cyclic_group(3);
        assert_eq!(eval_term(&z3, &t("mul(x,mul(y,y))", &z3), &env).unwrap(), 0);
        let env: Env = [(Var::X, 2)].into_iter().collect();
        assert_eq!(eval_term(&z3, &t("x", &z3), &env).unwrap(), 2);
        assert_eq!(
            eval_term(&z3, &t("mul(x,y)", &z3), &env).unwrap_err(),
            UalgError::UnboundVariable(Var::Y)
        );
    }

    #[test]
    fn identity_examples() {
        let z2 = corpus::cyclic_group(2);
        assert!(is_identity(&z2, &t("mul(x,y)", &z2), &t("mul(y,x)", &z2)).unwrap().holds());

        let s3 = corpus::symmetric_group(3);
        let w = is_identity(&s3, &t("mul(x,y)", &s3), &t("mul(y,x)", &s3)).unwrap().into_witness().unwrap();
        let (a, b) = (w[&Var::X], w[&Var::Y]);
        assert_ne!(s3.apply2(0, a, b), s3.apply2(0, b, a));
        // Exhaustive search for the least non-commuting pair.
        let oracle = (0..36)
            .map(|c| (c / 6, c % 6))
            .find(|&(a, b)| s3.apply2(0, a, b) != s3.apply2(0, b, a))
            .unwrap();
        assert_eq!((a, b), oracle);
    }

    #[test]
    fn lattice_relation_is_not_an_identity_of_the_two_element_lattice() {
        let l2 = corpus::chain_lattice(2);
        let (lhs, rhs) = parse_equation(
            "meet(join(x,y), join(x',y')) = meet(join(x,y'), join(x',y))",
            l2.signature(),
        )
        .unwrap();
        let w = is_identity(&l2, &lhs, &rhs).unwrap().into_witness().unwrap();
        assert_ne!(eval_term(&l2, &lhs, &w).unwrap(), eval_term(&l2, &rhs, &w).unwrap());
    }

    #[test]
    fn algebra_doc_validation() {
        let doc: AlgebraDoc = serde_json::from_str(
            r#"{"name":"bad","size":2,"ops":[{"symbol":"mul","arity":2,"table":[0,1,1]}]}"#,
        )
        .unwrap();
        assert_eq!(
            doc.to_algebra().unwrap_err(),
            UalgError::TableLength { symbol: "mul".into(), expected: 4, found: 3 }
        );
        let doc: AlgebraDoc = serde_json::from_str(
            r#"{"name":"bad","size":2,"ops":[{"symbol":"mul","arity":2,"table":[0,1,1,7]}]}"#,
        )
        .unwrap();
        assert!(matches!(doc.to_algebra(), Err(UalgError::EntryOutOfRange { position: 3, .. })));
        let z3 = corpus::cyclic_group(3);
        assert_eq!(z3.to_doc().to_algebra().unwrap(), z3);
    }
}
