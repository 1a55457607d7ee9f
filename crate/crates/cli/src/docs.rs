//! Loading JSON documents and resolving algebra references.

use std::path::{Path, PathBuf};

use reductlab::corpus;
use reductlab::eklab::{ExactMatrix, MatrixDoc};
use reductlab::redprod::ProductFamily;
use reductlab::relcheck::{Flavor, FormalRelation, RelationDoc};
use reductlab::setfam::{Filter, FilterDoc};
use reductlab::ualg::{AlgebraDoc, FiniteAlgebra, HomTable, Signature, UalgError};
use serde::de::DeserializeOwned;
use serde::Deserialize;

use crate::report::InputError;

type Result<T> = std::result::Result<T, InputError>;

fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = std::fs::read_to_string(path).map_err(|e| InputError(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| InputError(format!("{}: {e}", path.display())))
}

fn dir_of(path: &Path) -> PathBuf {
    path.parent().map(Path::to_path_buf).unwrap_or_default()
}

/// Describes an algebra-construction error, giving the first missing
/// position when a table is short.
fn algebra_error(origin: &str, e: UalgError) -> InputError {
    match e {
        UalgError::TableLength { symbol, expected, found } if found < expected => InputError(format!(
            "{origin}: table of `{symbol}` is not total: first missing entry at position {found} ({found} of {expected} entries)"
        )),
        e => InputError(format!("{origin}: {e}")),
    }
}

/// Resolves `reference` as a document path relative to `base`, then as a
/// built-in algebra name.
pub fn algebra(reference: &str, base: &Path) -> Result<FiniteAlgebra> {
    let path = base.join(reference);
    if path.is_file() {
        let doc: AlgebraDoc = read_json(&path)?;
        return doc.to_algebra().map_err(|e| algebra_error(&path.display().to_string(), e));
    }
    corpus::builtin(reference)
        .ok_or_else(|| InputError(format!("{reference:?} is neither an algebra document nor a built-in algebra")))
}

pub fn family(references: &[String], base: &Path) -> Result<ProductFamily> {
    let factors = references.iter().map(|r| algebra(r, base)).collect::<Result<Vec<_>>>()?;
    Ok(ProductFamily::new(factors)?)
}

pub fn filter(path: &Path) -> Result<Filter> {
    let doc: FilterDoc = read_json(path)?;
    doc.to_filter().map_err(|e| InputError(format!("{}: {e}", path.display())))
}

pub fn filter_doc(path: &Path) -> Result<FilterDoc> {
    read_json(path)
}

pub fn matrix(path: &Path) -> Result<ExactMatrix> {
    let doc: MatrixDoc = read_json(path)?;
    doc.to_matrix().map_err(|e| InputError(format!("{}: {e}", path.display())))
}

/// A signature reference: `group`, `ring`, `lattice`, or any algebra reference.
pub fn signature(reference: &str, base: &Path) -> Result<Signature> {
    Ok(match reference {
        "group" => corpus::group_signature(),
        "ring" => corpus::ring_signature(),
        "lattice" => corpus::lattice_signature(),
        other => algebra(other, base)?.signature().clone(),
    })
}

pub fn relation(path: &Path) -> Result<FormalRelation> {
    let doc: RelationDoc = read_json(path)?;
    let sig = signature(&doc.signature, &dir_of(path))?;
    doc.to_relation(&sig).map_err(|e| InputError(format!("{}: {e}", path.display())))
}

#[derive(Debug, Deserialize)]
struct HomDoc {
    factors: Vec<String>,
    #[serde(default)]
    codomain: Option<String>,
    table: Vec<usize>,
}

/// A map on a product, read from a homomorphism document.
pub struct MapOnProduct {
    pub family: ProductFamily,
    pub codomain: Option<FiniteAlgebra>,
    pub table: Vec<usize>,
}

impl MapOnProduct {
    pub fn load(path: &Path) -> Result<MapOnProduct> {
        let doc: HomDoc = read_json(path)?;
        let base = dir_of(path);
        let family = family(&doc.factors, &base)?;
        if doc.table.len() != family.carrier_size() {
            return Err(InputError(format!(
                "{}: table has {} entries, the product has {} elements",
                path.display(),
                doc.table.len(),
                family.carrier_size()
            )));
        }
        let codomain = doc.codomain.as_deref().map(|r| algebra(r, &base)).transpose()?;
        if let Some(c) = &codomain {
            if let Some(position) = doc.table.iter().position(|&v| v >= c.size()) {
                return Err(InputError(format!(
                    "{}: table entry {} at position {position} lies outside {} of size {}",
                    path.display(),
                    doc.table[position],
                    c.name(),
                    c.size()
                )));
            }
        }
        Ok(MapOnProduct { family, codomain, table: doc.table })
    }

    /// The map as a homomorphism; `Ok(Err(_))` when the law fails.
    pub fn hom(&self) -> Result<std::result::Result<HomTable, UalgError>> {
        let codomain = self.codomain.clone().ok_or_else(|| InputError("the document names no codomain".into()))?;
        let domain = self.family.product()?;
        match HomTable::new(domain, codomain, self.table.clone()) {
            Err(e @ UalgError::NotHomomorphism(_)) => Ok(Err(e)),
            other => Ok(Ok(other?)),
        }
    }
}

/// Ring when the signature has `neg`, group when it has `inv`.
pub fn infer_flavor(a: &FiniteAlgebra, explicit: Option<Flavor>) -> Result<Flavor> {
    if let Some(f) = explicit {
        return Ok(f);
    }
    let sig = a.signature();
    if sig.index_of("neg").is_some() {
        Ok(Flavor::Ring)
    } else if sig.index_of("inv").is_some() {
        Ok(Flavor::Group)
    } else {
        Err(InputError(format!("cannot tell whether {} is a ring or a group; pass --flavor", a.name())))
    }
}
