use crate::{Error, Result};
use num_complex::Complex64;

/// Refractive index of air.
pub const N_AIR: f64 = 1.0;

/// Complex refractive index `n_real - i*n_imag` and roughness of a surface.
///
/// `sigma_m` is used directly as the microfacet slope parameter of the
/// roughness distribution; the tabulated micrometre values are taken as-is.
#[derive(Debug, Clone, PartialEq)]
pub struct Material {
    pub name: String,
    pub n_real: f64,
    pub n_imag: f64,
    pub sigma_m: f64,
}

impl Material {
    pub fn new(name: impl Into<String>, n_real: f64, n_imag: f64, sigma_m: f64) -> Result<Self> {
        let name = name.into();
        if !(n_real.is_finite() && n_real > 0.0) {
            return Err(Error::Domain(format!("{name}: n_real must be > 0, got {n_real}")));
        }
        if !(n_imag.is_finite() && n_imag >= 0.0) {
            return Err(Error::Domain(format!("{name}: n_imag must be >= 0, got {n_imag}")));
        }
        if !(sigma_m.is_finite() && sigma_m > 0.0) {
            return Err(Error::Domain(format!("{name}: sigma_m must be > 0, got {sigma_m}")));
        }
        Ok(Self {
            name,
            n_real,
            n_imag,
            sigma_m,
        })
    }

    #[inline]
    pub fn refractive_index(&self) -> Complex64 {
        Complex64::new(self.n_real, -self.n_imag)
    }
}

/// Immutable lookup table of materials, keyed case-insensitively by name.
#[derive(Debug, Clone, PartialEq)]
pub struct MaterialDb {
    materials: Vec<Material>,
}

const BUILTIN: [(&str, f64, f64, f64); 5] = [
    ("aluminum", 4.88, 1.17, 0.63),
    ("nickel", 3.84, 0.71, 0.92),
    ("paper", 2.65, 0.0, 1.01),
    ("cfrp", 2.77, 0.0, 1.11),
    ("rubber", 1.93, 0.0, 1.17),
];

impl MaterialDb {
    pub fn builtin() -> Self {
        Self {
            materials: BUILTIN
                .iter()
                .map(|&(name, n, k, s)| Material {
                    name: name.to_string(),
                    n_real: n,
                    n_imag: k,
                    sigma_m: s,
                })
                .collect(),
        }
    }

    pub fn from_materials(materials: Vec<Material>) -> Result<Self> {
        let mut db = Self { materials: Vec::new() };
        for m in materials {
            db.insert(m);
        }
        Ok(db)
    }

    /// Parse a plain-text table with one `name n_real n_imag sigma_m` row per
    /// line. Fields may be separated by whitespace or commas; `#` starts a
    /// comment and a header row whose second field is not numeric is skipped.
    pub fn parse_table(text: &str) -> Result<Self> {
        let mut materials = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let fields: Vec<&str> = line
                .split(|c: char| c == ',' || c.is_whitespace())
                .filter(|f| !f.is_empty())
                .collect();
            if fields.len() != 4 {
                return Err(Error::Schema(format!(
                    "material table line {}: expected 4 fields, got {}",
                    lineno + 1,
                    fields.len()
                )));
            }
            let parse = |f: &str| f.parse::<f64>();
            match (parse(fields[1]), parse(fields[2]), parse(fields[3])) {
                (Ok(n), Ok(k), Ok(s)) => materials.push(Material::new(fields[0], n, k, s)?),
                _ if materials.is_empty() && parse(fields[1]).is_err() => continue,
                _ => {
                    return Err(Error::Schema(format!(
                        "material table line {}: non-numeric field",
                        lineno + 1
                    )))
                }
            }
        }
        Self::from_materials(materials)
    }

    /// Built-in table with rows from `text` added or replacing same-named rows.
    pub fn builtin_with_overrides(text: &str) -> Result<Self> {
        let mut db = Self::builtin();
        for m in Self::parse_table(text)?.materials {
            db.insert(m);
        }
        Ok(db)
    }

    fn insert(&mut self, m: Material) {
        match self
            .materials
            .iter_mut()
            .find(|e| e.name.eq_ignore_ascii_case(&m.name))
        {
            Some(slot) => *slot = m,
            None => self.materials.push(m),
        }
    }

    pub fn get(&self, name: &str) -> Result<&Material> {
        self.materials
            .iter()
            .find(|m| m.name.eq_ignore_ascii_case(name))
            .ok_or_else(|| Error::UnknownMaterial(name.to_string()))
    }

    pub fn iter(&self) -> impl Iterator<Item = &Material> {
        self.materials.iter()
    }

    pub fn len(&self) -> usize {
        self.materials.len()
    }

    pub fn is_empty(&self) -> bool {
        self.materials.is_empty()
    }
}

impl Default for MaterialDb {
    fn default() -> Self {
        Self::builtin()
    }
}
