//! Text format for L-function specifications.
//!
//! A spec file is TOML:
//!
//! ```toml
//! coefficients = "sym2"        # zeta | dirichlet | sym2 | conv | explicit
//! form = "s26"                 # s26 | level1:<k> | cm:<disc>:<u>
//! character = -3               # twist or Dirichlet character (fundamental discriminant)
//! conductor = 27               # optional, builder default otherwise
//! gamma_shifts = ["C:0", "R:-25"]
//! motivic_weight = 50
//! root_number = "1"            # "1", "-1" or "unknown"
//! ```
//!
//! `second_form` names g for convolutions, `values` lists b(1), b(2), ... for
//! explicit coefficients, and `poles = [[s, "residue"], ...]` adds polar terms.

use std::path::Path;
use std::sync::Arc;

use rug::{Integer, Rational};
use serde::Deserialize;

use super::{
    conv_spec, dirichlet_spec, sym2_spec, zeta_spec, Coefficients, GammaKind, GammaShift, LFunctionSpec, RootNumber,
};
use crate::error::{Error, Result};
use crate::exact::DirichletCharacter;
use crate::heckechar::{cm_form, ImagQuadField};
use crate::qexp::{newform_s26, unique_level_one_form, QExpansion};

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpecFile {
    pub name: Option<String>,
    pub coefficients: String,
    pub form: Option<String>,
    pub second_form: Option<String>,
    pub character: Option<i64>,
    pub conductor: Option<u64>,
    pub gamma_shifts: Option<Vec<String>>,
    pub motivic_weight: Option<i64>,
    pub root_number: Option<String>,
    pub values: Option<Vec<i64>>,
    pub poles: Option<Vec<(i64, String)>>,
    /// Number of q-expansion coefficients to compute for named forms.
    pub terms: Option<usize>,
}

fn bad(msg: impl Into<String>) -> Error {
    Error::ConfigInvalid(vec![msg.into()])
}

/// Parses "R:0" or "C:-6".
pub fn parse_gamma_shift(s: &str) -> Result<GammaShift> {
    let (kind, shift) = s.split_once(':').ok_or_else(|| bad(format!("gamma shift {s:?} is not KIND:SHIFT")))?;
    let shift: i64 = shift.trim().parse().map_err(|_| bad(format!("gamma shift {s:?}: shift must be an integer")))?;
    let kind = match kind.trim() {
        "R" => GammaKind::R,
        "C" => GammaKind::C,
        k => return Err(bad(format!("gamma kind {k:?} is not R or C"))),
    };
    Ok(GammaShift { kind, shift })
}

/// Parses a form name: "s26", "level1:<k>" or "cm:<disc>:<u>".
pub fn parse_form(s: &str, terms: usize) -> Result<QExpansion> {
    let parts: Vec<&str> = s.split(':').collect();
    let int = |x: &str| x.trim().parse::<i64>().map_err(|_| bad(format!("form {s:?}: {x:?} is not an integer")));
    match parts.as_slice() {
        ["s26"] => newform_s26(terms),
        ["level1", k] => unique_level_one_form(int(k)?, terms),
        ["cm", d, u] => cm_form(&ImagQuadField::new(int(d)?)?, int(u)?, terms),
        _ => Err(bad(format!("unknown form {s:?}"))),
    }
}

fn character(d: Option<i64>) -> Result<DirichletCharacter> {
    match d {
        None | Some(1) => Ok(DirichletCharacter::trivial(1)),
        Some(d) if crate::exact::character::is_fundamental_discriminant(d) => Ok(DirichletCharacter::kronecker(d)),
        Some(d) => Err(bad(format!("character {d} is not a fundamental discriminant"))),
    }
}

impl SpecFile {
    pub fn parse(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| bad(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| bad(format!("{}: {e}", path.display())))?;
        Self::parse(&text)
    }

    /// Builds the spec; fields left out keep the builder's defaults.
    pub fn build(&self) -> Result<LFunctionSpec> {
        let terms = self.terms.unwrap_or(crate::qexp::DEFAULT_TRUNCATION);
        let form = |f: &Option<String>, key: &str| -> Result<QExpansion> {
            let name = f.as_deref().ok_or_else(|| bad(format!("{key} is required for {}", self.coefficients)))?;
            parse_form(name, terms)
        };
        let mut spec = match self.coefficients.as_str() {
            "zeta" => zeta_spec(),
            "dirichlet" => dirichlet_spec(character(self.character)?)?,
            "sym2" => sym2_spec(&form(&self.form, "form")?, character(self.character)?, 2)?,
            "conv" => conv_spec(&form(&self.form, "form")?, &form(&self.second_form, "second_form")?, 2)?,
            "explicit" => {
                let vals = self.values.as_ref().ok_or_else(|| bad("values are required for explicit coefficients"))?;
                let mut b = vec![Integer::new()];
                b.extend(vals.iter().map(|&x| Integer::from(x)));
                let mut s = zeta_spec();
                s.name = "explicit".into();
                s.coeffs = Coefficients::Explicit(Arc::new(b));
                s.poles.clear();
                s.root_number = RootNumber::Unknown;
                s
            }
            other => return Err(bad(format!("unknown coefficients {other:?}"))),
        };
        if let Some(n) = &self.name {
            spec.name = n.clone();
        }
        if let Some(n) = self.conductor {
            spec.conductor = n;
        }
        if let Some(g) = &self.gamma_shifts {
            spec.gamma_shifts = g.iter().map(|s| parse_gamma_shift(s)).collect::<Result<_>>()?;
        }
        if let Some(w) = self.motivic_weight {
            spec.motivic_weight = w;
        }
        if let Some(p) = &self.poles {
            spec.poles = p
                .iter()
                .map(|(s, r)| r.parse::<Rational>().map(|r| (*s, r)).map_err(|_| bad(format!("residue {r:?}"))))
                .collect::<Result<_>>()?;
        }
        match self.root_number.as_deref() {
            None => {}
            Some("unknown") => spec.root_number = RootNumber::Unknown,
            Some("1") | Some("+1") => spec.root_number = RootNumber::sign(1),
            Some("-1") => spec.root_number = RootNumber::sign(-1),
            Some(r) => return Err(bad(format!("root_number {r:?} is not 1, -1 or unknown"))),
        }
        Ok(spec)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zeta_file() {
        let s = SpecFile::parse("coefficients = \"zeta\"\n").unwrap().build().unwrap();
        assert_eq!(s.conductor, 1);
        assert_eq!(s.poles.len(), 2);
    }

    #[test]
    fn sym2_file_with_overrides() {
        let text = r#"
coefficients = "sym2"
form = "s26"
character = -3
terms = 50
conductor = 27
gamma_shifts = ["C:0", "R:-25"]
root_number = "1"
"#;
        let s = SpecFile::parse(text).unwrap().build().unwrap();
        assert_eq!(s.conductor, 27);
        assert_eq!(s.lambdas(), vec![-25, 0, 1]);
        assert!(matches!(s.root_number, RootNumber::Known(_)));
    }

    #[test]
    fn unknown_keys_and_bad_values() {
        assert!(SpecFile::parse("coefficients = \"zeta\"\nfoo = 1\n").is_err());
        let s = SpecFile::parse("coefficients = \"dirichlet\"\ncharacter = 5\n").unwrap().build().unwrap();
        assert_eq!(s.conductor, 5);
        assert!(SpecFile::parse("coefficients = \"dirichlet\"\ncharacter = 6\n").unwrap().build().is_err());
        assert!(parse_gamma_shift("X:1").is_err());
        assert!(parse_form("nope", 10).is_err());
    }
}
