use std::fmt;

use serde::{Serialize, Serializer};

/// Which of the bracket conditions a complement `m` of `h` satisfies.
///
/// * reductive: `[h, m] ⊆ m`
/// * symmetric: reductive and `[m, m] ⊆ h`
/// * ideal: reductive and `[g, m] ⊆ m`
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct ComplementType {
    pub reductive: bool,
    pub symmetric: bool,
    pub ideal: bool,
}

impl ComplementType {
    pub const NON_REDUCTIVE: Self = Self { reductive: false, symmetric: false, ideal: false };
    pub const REDUCTIVE: Self = Self { reductive: true, symmetric: false, ideal: false };

    /// Worksheet cells list `S`, `I`, `S,I` or `R`; an empty cell marks a
    /// complement that is not reductive.
    pub fn from_worksheet_cell(cell: &str) -> Option<Self> {
        if cell.trim().is_empty() {
            return Some(Self::NON_REDUCTIVE);
        }
        Self::from_flags(cell)
    }

    /// Summary cells list `S`, `I` or `S,I`; an empty cell means reductive
    /// but neither symmetric nor ideal.
    pub fn from_summary_cell(cell: &str) -> Option<Self> {
        if cell.trim().is_empty() {
            return Some(Self::REDUCTIVE);
        }
        Self::from_flags(cell)
    }

    fn from_flags(cell: &str) -> Option<Self> {
        let mut t = Self::REDUCTIVE;
        for part in cell.split(',').map(str::trim) {
            match part {
                "S" => t.symmetric = true,
                "I" => t.ideal = true,
                "R" => {}
                _ => return None,
            }
        }
        Some(t)
    }

    /// Inverse of [`from_worksheet_cell`](Self::from_worksheet_cell).
    pub fn worksheet_cell(&self) -> String {
        if !self.reductive {
            return String::new();
        }
        match self.summary_cell().as_str() {
            "" => "R".to_string(),
            s => s.to_string(),
        }
    }

    /// Inverse of [`from_summary_cell`](Self::from_summary_cell). Not
    /// meaningful for non-reductive complements.
    pub fn summary_cell(&self) -> String {
        match (self.symmetric, self.ideal) {
            (true, true) => "S,I",
            (true, false) => "S",
            (false, true) => "I",
            (false, false) => "",
        }
        .to_string()
    }
}

impl fmt::Display for ComplementType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.worksheet_cell())
    }
}

impl Serialize for ComplementType {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.worksheet_cell())
    }
}

/// The three isotropy types that occur for Lorentz spaces.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum IsotropyLabel {
    Rotation,
    Boost,
    Null,
}

impl IsotropyLabel {
    pub fn letter(self) -> &'static str {
        match self {
            IsotropyLabel::Rotation => "R",
            IsotropyLabel::Boost => "B",
            IsotropyLabel::Null => "N",
        }
    }

    pub fn from_letter(s: &str) -> Option<Self> {
        match s.trim() {
            "R" => Some(IsotropyLabel::Rotation),
            "B" => Some(IsotropyLabel::Boost),
            "N" => Some(IsotropyLabel::Null),
            _ => None,
        }
    }
}

impl fmt::Display for IsotropyLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.letter())
    }
}

/// Marker for the G3 space without a Petrov number.
pub const MISSING: &str = "M";

/// Canonical spelling of a Petrov id.
///
/// G4 ids (`32.x`) get a two-digit minor, G3 ids (`30.x`) keep the single
/// digit they are always printed with, whitespace is dropped, and the
/// missing G3 space is `M` however it is spelled.
pub fn normalize_petrov_id(id: &str) -> String {
    let id: String = id.chars().filter(|c| !c.is_whitespace()).collect();
    if id.eq_ignore_ascii_case("m") || id.eq_ignore_ascii_case("missing") {
        return MISSING.to_string();
    }
    let Some((major, rest)) = id.split_once('.') else {
        return id;
    };
    let digits = rest.chars().take_while(char::is_ascii_digit).count();
    let (minor, suffix) = rest.split_at(digits);
    let Ok(n) = minor.parse::<u32>() else {
        return id;
    };
    match major {
        "32" => format!("32.{n:02}{suffix}"),
        _ => format!("{major}.{n}{suffix}"),
    }
}

/// `30` or `32` prefix, i.e. whether the action is a G3 or a G4.
pub fn group_dim_of(id: &str) -> Option<usize> {
    match id.split_once('.').map(|p| p.0) {
        Some("30") => Some(3),
        Some("32") => Some(4),
        _ if id == MISSING => Some(3),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn id_normalization() {
        assert_eq!(normalize_petrov_id("32.3"), "32.03");
        assert_eq!(normalize_petrov_id("32.24 (-)"), "32.24(-)");
        assert_eq!(normalize_petrov_id("32.14 (c=0)"), "32.14(c=0)");
        assert_eq!(normalize_petrov_id("30.06"), "30.6");
        assert_eq!(normalize_petrov_id("Missing"), "M");
        assert_eq!(group_dim_of("32.9"), Some(4));
        assert_eq!(group_dim_of("M"), Some(3));
    }

    #[test]
    fn complement_cells_round_trip() {
        for cell in ["", "R", "S", "I", "S,I"] {
            assert_eq!(ComplementType::from_worksheet_cell(cell).unwrap().worksheet_cell(), cell);
        }
        for cell in ["", "S", "I", "S,I"] {
            assert_eq!(ComplementType::from_summary_cell(cell).unwrap().summary_cell(), cell);
        }
        assert!(ComplementType::from_summary_cell("").unwrap().reductive);
        assert!(!ComplementType::from_worksheet_cell("").unwrap().reductive);
        assert!(ComplementType::from_worksheet_cell("X").is_none());
    }
}
