//! Catalog of irreducible well-generated reflection groups.
//!
//! Each entry is one JSON document: name, rank, conductor, degrees, codegrees,
//! order, reflection count and generator matrices whose entries are
//! `{conductor, coeffs}` pairs. Integers and rationals are decimal strings.
//! Entries are validated when loaded. A directory named by `NCSIEVE_CATALOG`
//! takes precedence over the shipped files.

use std::path::Path;

use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::cyclo::{parse_rational, Cyclotomic};
use crate::error::CatalogError;
use crate::linalg::Matrix;

pub const CATALOG_ENV: &str = "NCSIEVE_CATALOG";

#[derive(Clone, Debug)]
pub struct CatalogEntry {
    pub name: String,
    pub rank: usize,
    pub conductor: u32,
    /// Defined over the reals (Coxeter group).
    pub real: bool,
    /// Enumeration needs the large-group flag.
    pub large: bool,
    pub generators: Vec<Matrix>,
    pub degrees: Vec<u64>,
    pub codegrees: Vec<u64>,
    pub order: u64,
    pub reflections: u64,
}

impl CatalogEntry {
    /// Coxeter number h = d_n.
    pub fn coxeter_number(&self) -> u64 {
        *self.degrees.last().expect("nonempty degrees")
    }

    /// Entries without generators carry invariants only and are never built.
    pub fn buildable(&self) -> bool {
        !self.generators.is_empty()
    }

    /// Check the numerical invariants and the shape of the generators.
    pub fn validate(&self) -> Result<(), CatalogError> {
        let bad = |msg: String| Err(CatalogError::Invalid { name: self.name.clone(), msg });
        let n = self.rank;
        if n == 0 || self.degrees.len() != n || self.codegrees.len() != n {
            return bad(format!("rank {n} but {} degrees, {} codegrees", self.degrees.len(), self.codegrees.len()));
        }
        if self.degrees.windows(2).any(|w| w[0] > w[1]) {
            return bad("degrees not ascending".into());
        }
        if self.codegrees.windows(2).any(|w| w[0] < w[1]) {
            return bad("codegrees not descending".into());
        }
        let prod: u128 = self.degrees.iter().map(|&d| d as u128).product();
        if prod != self.order as u128 {
            return bad(format!("product of degrees {prod} != order {}", self.order));
        }
        let refl: u64 = self.degrees.iter().map(|d| d - 1).sum();
        if refl != self.reflections {
            return bad(format!("sum of (d_i - 1) = {refl} != reflection count {}", self.reflections));
        }
        let h = self.coxeter_number();
        if self.degrees.iter().zip(&self.codegrees).any(|(d, c)| d + c != h) {
            return bad("d_i + d_i* != d_n (not well-generated)".into());
        }
        if self.buildable() {
            if self.generators.len() != n {
                return bad(format!("{} generators for rank {n}", self.generators.len()));
            }
            for (i, g) in self.generators.iter().enumerate() {
                if g.len() != n || g.iter().any(|r| r.len() != n) {
                    return bad(format!("generator {i} is not {n}x{n}"));
                }
                if g.iter().flatten().any(|x| self.conductor % x.conductor() != 0) {
                    return bad(format!("generator {i} has an entry outside Q(ζ_{})", self.conductor));
                }
            }
        }
        Ok(())
    }

    pub fn to_document(&self) -> String {
        let doc = EntryDoc {
            name: self.name.clone(),
            rank: self.rank.to_string(),
            conductor: self.conductor.to_string(),
            real: self.real,
            large: self.large,
            degrees: self.degrees.iter().map(u64::to_string).collect(),
            codegrees: self.codegrees.iter().map(u64::to_string).collect(),
            order: self.order.to_string(),
            reflections: self.reflections.to_string(),
            generators: self
                .generators
                .iter()
                .map(|g| g.iter().map(|r| r.iter().map(ScalarDoc::from_value).collect()).collect())
                .collect(),
        };
        serde_json::to_string_pretty(&doc).expect("serializable") + "\n"
    }

    pub fn from_document(text: &str) -> Result<Self, CatalogError> {
        let doc: EntryDoc = serde_json::from_str(text)
            .map_err(|source| CatalogError::Parse { name: "<document>".into(), source })?;
        doc.into_entry()
    }
}

#[derive(Serialize, Deserialize)]
struct ScalarDoc {
    conductor: String,
    coeffs: Vec<String>,
}

impl ScalarDoc {
    fn from_value(x: &Cyclotomic) -> Self {
        ScalarDoc { conductor: x.conductor().to_string(), coeffs: x.coeffs().iter().map(|c| c.to_string()).collect() }
    }
}

#[derive(Serialize, Deserialize)]
struct EntryDoc {
    name: String,
    rank: String,
    conductor: String,
    #[serde(default)]
    real: bool,
    #[serde(default)]
    large: bool,
    degrees: Vec<String>,
    codegrees: Vec<String>,
    order: String,
    reflections: String,
    #[serde(default)]
    generators: Vec<Vec<Vec<ScalarDoc>>>,
}

impl EntryDoc {
    fn into_entry(self) -> Result<CatalogEntry, CatalogError> {
        let name = self.name.clone();
        let invalid = |msg: String| CatalogError::Invalid { name: name.clone(), msg };
        let int = |s: &str, what: &str| -> Result<u64, CatalogError> {
            s.trim().parse::<u64>().map_err(|_| invalid(format!("{what}: `{s}` is not a nonnegative integer")))
        };
        let conductor = int(&self.conductor, "conductor")? as u32;
        if conductor == 0 {
            return Err(invalid("conductor 0".into()));
        }
        let mut generators = Vec::with_capacity(self.generators.len());
        for g in &self.generators {
            let mut m = Vec::with_capacity(g.len());
            for row in g {
                let mut r = Vec::with_capacity(row.len());
                for s in row {
                    let c = int(&s.conductor, "entry conductor")? as u32;
                    if c == 0 {
                        return Err(invalid("entry conductor 0".into()));
                    }
                    let coeffs: Option<Vec<BigRational>> = s.coeffs.iter().map(|x| parse_rational(x)).collect();
                    let coeffs = coeffs.ok_or_else(|| invalid("unparsable coefficient".into()))?;
                    let v = Cyclotomic::from_coeffs(c, coeffs).map_err(|e| invalid(e.to_string()))?;
                    if conductor % c != 0 {
                        return Err(invalid(format!("entry conductor {c} does not divide {conductor}")));
                    }
                    r.push(v.embed(conductor));
                }
                m.push(r);
            }
            generators.push(m);
        }
        let degrees = self.degrees.iter().map(|d| int(d, "degree")).collect::<Result<Vec<_>, _>>()?;
        let codegrees = self.codegrees.iter().map(|d| int(d, "codegree")).collect::<Result<Vec<_>, _>>()?;
        let entry = CatalogEntry {
            name: self.name,
            rank: int(&self.rank, "rank")? as usize,
            conductor,
            real: self.real,
            large: self.large,
            generators,
            degrees,
            codegrees,
            order: int(&self.order, "order")?,
            reflections: int(&self.reflections, "reflections")?,
        };
        entry.validate()?;
        Ok(entry)
    }
}

macro_rules! shipped {
    ($($name:literal => $file:literal),* $(,)?) => {
        const SHIPPED: &[(&str, &str)] = &[$(($name, include_str!(concat!("../catalog/", $file)))),*];
    };
}

shipped! {
    "A1" => "A1.json", "A2" => "A2.json", "A3" => "A3.json", "A4" => "A4.json", "A5" => "A5.json",
    "B2" => "B2.json", "B3" => "B3.json", "B4" => "B4.json", "D4" => "D4.json",
    "I2(5)" => "I2_5.json", "I2(6)" => "I2_6.json", "I2(7)" => "I2_7.json", "I2(8)" => "I2_8.json",
    "I2(9)" => "I2_9.json", "I2(10)" => "I2_10.json", "I2(11)" => "I2_11.json", "I2(12)" => "I2_12.json",
    "H3" => "H3.json", "H4" => "H4.json", "F4" => "F4.json", "E6" => "E6.json", "E7" => "E7.json",
    "E8" => "E8.json",
    "G4" => "G4.json", "G5" => "G5.json", "G6" => "G6.json", "G8" => "G8.json", "G9" => "G9.json",
    "G10" => "G10.json", "G14" => "G14.json", "G16" => "G16.json", "G17" => "G17.json",
    "G18" => "G18.json", "G20" => "G20.json", "G21" => "G21.json", "G24" => "G24.json",
    "G25" => "G25.json", "G26" => "G26.json", "G27" => "G27.json", "G29" => "G29.json",
    "G32" => "G32.json", "G33" => "G33.json", "G34" => "G34.json",
}

/// Alternative names accepted on input.
const ALIASES: &[(&str, &str)] = &[
    ("I2(3)", "A2"),
    ("I2(4)", "B2"),
    ("G2", "I2(6)"),
    ("G23", "H3"),
    ("G28", "F4"),
    ("G30", "H4"),
    ("G35", "E6"),
    ("G36", "E7"),
    ("G37", "E8"),
];

/// File name used for an entry (`I2(5)` is stored as `I2_5.json`).
pub fn file_slug(name: &str) -> String {
    name.replace('(', "_").replace(')', "") + ".json"
}

pub fn canonical_name(name: &str) -> &str {
    ALIASES.iter().find(|(a, _)| *a == name).map_or(name, |(_, b)| b)
}

/// Names of the shipped entries, in catalog order.
pub fn shipped_names() -> Vec<&'static str> {
    SHIPPED.iter().map(|(n, _)| *n).collect()
}

/// Load and validate an entry, looking first in `NCSIEVE_CATALOG`.
pub fn load_catalog(name: &str) -> Result<CatalogEntry, CatalogError> {
    let dir = std::env::var_os(CATALOG_ENV);
    load_catalog_from(name, dir.as_deref().map(Path::new))
}

pub fn load_catalog_from(name: &str, dir: Option<&Path>) -> Result<CatalogEntry, CatalogError> {
    let name = canonical_name(name);
    if let Some(dir) = dir {
        let path = dir.join(file_slug(name));
        if path.exists() {
            return load_catalog_file(&path);
        }
    }
    let (_, text) = SHIPPED
        .iter()
        .find(|(n, _)| *n == name)
        .ok_or_else(|| CatalogError::Unknown(name.to_string()))?;
    let doc: EntryDoc =
        serde_json::from_str(text).map_err(|source| CatalogError::Parse { name: name.to_string(), source })?;
    doc.into_entry()
}

pub fn load_catalog_file(path: &Path) -> Result<CatalogEntry, CatalogError> {
    let text = std::fs::read_to_string(path)
        .map_err(|source| CatalogError::Io { path: path.display().to_string(), source })?;
    let doc: EntryDoc = serde_json::from_str(&text)
        .map_err(|source| CatalogError::Parse { name: path.display().to_string(), source })?;
    doc.into_entry()
}
