use serde::Serialize;

use super::{table_len, FiniteAlgebra, Signature, Tags, UalgError};

/// Largest operation table a product algebra will materialize.
pub const PRODUCT_TABLE_CAP: u64 = 1 << 24;

/// Little-endian mixed-radix codec: coordinate 0 is least significant.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct TupleCodec {
    radices: Vec<usize>,
    size: usize,
}

impl TupleCodec {
    pub fn new(radices: Vec<usize>) -> Self {
        let size = radices.iter().product();
        TupleCodec { radices, size }
    }

    pub fn radices(&self) -> &[usize] {
        &self.radices
    }

    pub fn arity(&self) -> usize {
        self.radices.len()
    }

    /// Number of tuples.
    pub fn size(&self) -> usize {
        self.size
    }

    pub fn encode(&self, coords: &[usize]) -> usize {
        debug_assert_eq!(coords.len(), self.radices.len());
        coords
            .iter()
            .zip(&self.radices)
            .rev()
            .fold(0, |acc, (&c, &r)| {
                debug_assert!(c < r);
                acc * r + c
            })
    }

    pub fn decode(&self, mut index: usize) -> Vec<usize> {
        self.radices
            .iter()
            .map(|&r| {
                let c = index % r;
                index /= r;
                c
            })
            .collect()
    }

    /// Coordinate `i` of the tuple with flat index `index`.
    pub fn coord(&self, index: usize, i: usize) -> usize {
        let stride: usize = self.radices[..i].iter().product();
        (index / stride) % self.radices[i]
    }
}

/// Direct product of `factors`, all over `sig`. The empty product is the
/// one-element algebra. Tags are carried over when every factor has them.
pub fn product_algebra(sig: &Signature, factors: &[FiniteAlgebra]) -> Result<(FiniteAlgebra, TupleCodec), UalgError> {
    if factors.iter().any(|f| f.signature() != sig) {
        return Err(UalgError::SignatureMismatch);
    }
    let codec = TupleCodec::new(factors.iter().map(FiniteAlgebra::size).collect());
    let size = codec.size();
    let mut tables = Vec::with_capacity(sig.symbols().len());
    for (op, sym) in sig.symbols().iter().enumerate() {
        let len = table_len(size, sym.arity)
            .map(|l| l as u64)
            .filter(|&l| l <= PRODUCT_TABLE_CAP)
            .ok_or(UalgError::TooLarge {
                what: "product operation table",
                size: (size as f64).powi(sym.arity as i32) as u64,
                cap: PRODUCT_TABLE_CAP,
            })? as usize;
        let mut table = Vec::with_capacity(len);
        let mut coords = vec![Vec::new(); sym.arity];
        let mut local = vec![0usize; sym.arity];
        let mut out = vec![0usize; factors.len()];
        for index in 0..len {
            let mut rest = index;
            for c in coords.iter_mut() {
                *c = codec.decode(rest % size);
                rest /= size;
            }
            for (i, f) in factors.iter().enumerate() {
                for (l, c) in local.iter_mut().zip(&coords) {
                    *l = c[i];
                }
                out[i] = f.apply(op, &local);
            }
            table.push(codec.encode(&out));
        }
        tables.push(table);
    }
    let lift = |pick: fn(&Tags) -> Option<usize>| -> Option<usize> {
        factors
            .iter()
            .map(|f| pick(&f.tags()))
            .collect::<Option<Vec<_>>>()
            .map(|coords| codec.encode(&coords))
    };
    let tags = Tags { identity: lift(|t| t.identity), zero: lift(|t| t.zero) };
    let name = if factors.is_empty() {
        "1".to_string()
    } else {
        factors.iter().map(|f| f.name().to_string()).collect::<Vec<_>>().join("×")
    };
    let algebra = FiniteAlgebra::new(&name, sig.clone(), size, tables, tags)?;
    Ok((algebra, codec))
}
