use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// One named basis vector and its degree.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BasisVector {
    pub name: String,
    pub degree: i64,
}

/// A finite-dimensional graded vector space given by a named basis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GradedSpace {
    basis: Vec<BasisVector>,
    index: HashMap<String, usize>,
}

impl GradedSpace {
    pub fn new<I, S>(basis: I) -> Result<Self>
    where
        I: IntoIterator<Item = (S, i64)>,
        S: Into<String>,
    {
        let basis: Vec<BasisVector> = basis
            .into_iter()
            .map(|(name, degree)| BasisVector {
                name: name.into(),
                degree,
            })
            .collect();
        let mut index = HashMap::with_capacity(basis.len());
        for (i, b) in basis.iter().enumerate() {
            if index.insert(b.name.clone(), i).is_some() {
                return Err(Error::DuplicateBasisName(b.name.clone()));
            }
        }
        Ok(Self { basis, index })
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[BasisVector] {
        &self.basis
    }

    pub fn degree(&self, i: usize) -> i64 {
        self.basis[i].degree
    }

    pub fn degrees(&self) -> Vec<i64> {
        self.basis.iter().map(|b| b.degree).collect()
    }

    pub fn name(&self, i: usize) -> &str {
        &self.basis[i].name
    }

    pub fn index_of(&self, name: &str) -> Result<usize> {
        self.index
            .get(name)
            .copied()
            .ok_or_else(|| Error::UnknownBasisName(name.to_string()))
    }

    /// Same basis, every degree moved by `by` (the space `V[by]`).
    pub fn shifted(&self, by: i64) -> Self {
        Self {
            basis: self
                .basis
                .iter()
                .map(|b| BasisVector {
                    name: b.name.clone(),
                    degree: b.degree + by,
                })
                .collect(),
            index: self.index.clone(),
        }
    }

    /// Basis indices grouped by degree.
    pub fn by_degree(&self) -> BTreeMap<i64, Vec<usize>> {
        let mut out: BTreeMap<i64, Vec<usize>> = BTreeMap::new();
        for (i, b) in self.basis.iter().enumerate() {
            out.entry(b.degree).or_default().push(i);
        }
        out
    }
}
