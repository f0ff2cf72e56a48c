use std::collections::HashMap;
use std::hash::{Hash, Hasher};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest table whose associativity is checked exhaustively.
const MAX_TABLE: usize = 512;

/// A finite group given by its full multiplication table and a generating
/// sublist.
#[derive(Clone, Debug)]
pub struct FiniteTable {
    labels: Vec<String>,
    product: Vec<usize>,
    generators: Vec<usize>,
    identity: usize,
    inverses: Vec<usize>,
    source: Option<String>,
}

impl PartialEq for FiniteTable {
    fn eq(&self, other: &Self) -> bool {
        self.labels == other.labels && self.product == other.product && self.generators == other.generators
    }
}

impl Eq for FiniteTable {}

impl Hash for FiniteTable {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.labels.hash(state);
        self.product.hash(state);
        self.generators.hash(state);
    }
}

#[derive(Deserialize, Serialize)]
#[serde(untagged)]
enum Entry {
    Index(usize),
    Label(String),
}

/// On-disk form: `{"elements": [...], "table": [[...]], "generators": [...]}`.
/// Table entries may be labels or indices; rows are left factors.
#[derive(Deserialize, Serialize)]
struct TableFile {
    elements: Vec<String>,
    table: Vec<Vec<Entry>>,
    generators: Vec<String>,
}

impl FiniteTable {
    /// Builds and checks a table. `product[i][j]` is the index of `i · j`.
    pub fn new(labels: Vec<String>, product: Vec<Vec<usize>>, generators: Vec<usize>) -> Result<Self> {
        let n = labels.len();
        if n == 0 {
            return Err(Error::Validation("empty group table".into()));
        }
        if n > MAX_TABLE {
            return Err(Error::budget("group table", n, MAX_TABLE));
        }
        if product.len() != n || product.iter().any(|row| row.len() != n) {
            return Err(Error::Validation(format!("table must be {n}x{n}")));
        }
        let flat: Vec<usize> = product.into_iter().flatten().collect();
        if let Some(bad) = flat.iter().find(|&&x| x >= n) {
            return Err(Error::Validation(format!("table entry {bad} out of range")));
        }
        let at = |i: usize, j: usize| flat[i * n + j];

        let identity = (0..n)
            .find(|&e| (0..n).all(|x| at(e, x) == x && at(x, e) == x))
            .ok_or_else(|| Error::Validation("table has no identity".into()))?;
        let mut inverses = vec![usize::MAX; n];
        for x in 0..n {
            inverses[x] = (0..n)
                .find(|&y| at(x, y) == identity && at(y, x) == identity)
                .ok_or_else(|| Error::Validation(format!("{} has no inverse", labels[x])))?;
        }
        for a in 0..n {
            for b in 0..n {
                let ab = at(a, b);
                for c in 0..n {
                    if at(ab, c) != at(a, at(b, c)) {
                        return Err(Error::Validation(format!(
                            "associativity fails on ({}, {}, {})",
                            labels[a], labels[b], labels[c]
                        )));
                    }
                }
            }
        }

        let mut seen = vec![false; n];
        for &g in &generators {
            if g >= n {
                return Err(Error::Validation(format!("generator index {g} out of range")));
            }
            if g == identity {
                return Err(Error::Validation("generators must not contain the identity".into()));
            }
            if std::mem::replace(&mut seen[g], true) {
                return Err(Error::Validation(format!("duplicate generator {}", labels[g])));
            }
        }
        let table = FiniteTable {
            labels,
            product: flat,
            generators,
            identity,
            inverses,
            source: None,
        };
        if table.generated_size(&table.generators) != n {
            return Err(Error::Validation("generators do not generate the table group".into()));
        }
        Ok(table)
    }

    /// Reads the JSON table format from disk.
    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)?;
        let mut t = Self::from_json(&text)?;
        t.source = Some(path.display().to_string());
        Ok(t)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: TableFile = serde_json::from_str(text)?;
        let index: HashMap<&str, usize> = file.elements.iter().enumerate().map(|(i, l)| (l.as_str(), i)).collect();
        if index.len() != file.elements.len() {
            return Err(Error::Validation("duplicate element labels".into()));
        }
        let lookup = |l: &str| {
            index
                .get(l)
                .copied()
                .ok_or_else(|| Error::Validation(format!("unknown label {l:?}")))
        };
        let product = file
            .table
            .iter()
            .map(|row| {
                row.iter()
                    .map(|e| match e {
                        Entry::Index(i) => Ok(*i),
                        Entry::Label(l) => lookup(l),
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        let generators = file.generators.iter().map(|l| lookup(l)).collect::<Result<Vec<_>>>()?;
        Self::new(file.elements, product, generators)
    }

    pub fn to_json(&self) -> String {
        let n = self.len();
        let file = TableFile {
            elements: self.labels.clone(),
            table: (0..n)
                .map(|i| {
                    (0..n)
                        .map(|j| Entry::Label(self.labels[self.product(i, j)].clone()))
                        .collect()
                })
                .collect(),
            generators: self.generators.iter().map(|&g| self.labels[g].clone()).collect(),
        };
        serde_json::to_string_pretty(&file).expect("table serializes")
    }

    /// Closure of the given permutations of `0..degree` under composition.
    /// The product `p · q` applies `q` first, then `p`, and the generators of
    /// the resulting table are the given permutations.
    pub fn permutation_group(degree: usize, generators: &[Vec<usize>]) -> Result<Self> {
        for p in generators {
            let mut seen = vec![false; degree];
            if p.len() != degree || p.iter().any(|&x| x >= degree || std::mem::replace(&mut seen[x], true)) {
                return Err(Error::Validation(format!("{p:?} is not a permutation of 0..{degree}")));
            }
        }
        let id: Vec<usize> = (0..degree).collect();
        let compose = |p: &[usize], q: &[usize]| -> Vec<usize> { q.iter().map(|&x| p[x]).collect() };
        let mut elems = vec![id];
        let mut index: HashMap<Vec<usize>, usize> = HashMap::from([(elems[0].clone(), 0)]);
        let mut i = 0;
        while i < elems.len() {
            for g in generators {
                let next = compose(&elems[i], g);
                if !index.contains_key(&next) {
                    if elems.len() >= MAX_TABLE {
                        return Err(Error::budget("permutation group", format!("> {MAX_TABLE}"), MAX_TABLE));
                    }
                    index.insert(next.clone(), elems.len());
                    elems.push(next);
                }
            }
            i += 1;
        }
        let labels = elems
            .iter()
            .map(|p| p.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(""))
            .collect();
        let product = elems
            .iter()
            .map(|p| elems.iter().map(|q| index[&compose(p, q)]).collect())
            .collect();
        let gens = generators.iter().map(|g| index[g]).collect();
        Self::new(labels, product, gens)
    }

    /// Same group and labels with a different generating list.
    pub fn with_generators(&self, generators: Vec<usize>) -> Result<Self> {
        let n = self.len();
        let rows = (0..n).map(|i| (0..n).map(|j| self.product(i, j)).collect()).collect();
        Self::new(self.labels.clone(), rows, generators)
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn product(&self, a: usize, b: usize) -> usize {
        self.product[a * self.len() + b]
    }

    pub fn inverse(&self, a: usize) -> usize {
        self.inverses[a]
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn generators(&self) -> &[usize] {
        &self.generators
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn source(&self) -> Option<&str> {
        self.source.as_deref()
    }

    /// Size of the subgroup generated by `gens`.
    pub(crate) fn generated_size(&self, gens: &[usize]) -> usize {
        let n = self.len();
        let mut seen = vec![false; n];
        seen[self.identity] = true;
        let mut stack = vec![self.identity];
        let mut count = 1;
        while let Some(x) = stack.pop() {
            for &g in gens {
                let y = self.product(x, g);
                if !seen[y] {
                    seen[y] = true;
                    count += 1;
                    stack.push(y);
                }
            }
        }
        count
    }
}
