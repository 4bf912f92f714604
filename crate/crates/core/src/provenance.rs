//! Tags naming the result that decided a verdict. They appear verbatim in
//! serialized reports, e.g. `"yes[4.2(iii)]"`.

use std::fmt;

use serde::{Serialize, Serializer};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Clause {
    /// Necessary conditions for boundedness.
    Prop2_2,
    /// Band-series sufficient condition for boundedness.
    Thm2_3,
    /// Strong sufficient conditions (`sup |aₙ₊₁/aₙ| < ∞`, `limsup |bₙ/aₙ₊₁| < 1`).
    Remark2_4,
    /// Compact-perturbation realization and essential-spectrum annulus.
    Thm3_1,
    Thm4_2i,
    Thm4_2ii,
    Thm4_2iii,
    Thm4_3i,
    Thm4_3ii,
    Thm4_3iii,
    Thm4_4iii,
    /// Hypercyclic subspaces.
    Cor4_5,
    /// Direct-sum reduction of the matrix-valued space.
    Thm5_1,
    Thm5_2i,
    Thm5_2ii,
    Thm5_2iii,
}

impl Clause {
    pub fn tag(self) -> &'static str {
        match self {
            Clause::Prop2_2 => "2.2",
            Clause::Thm2_3 => "2.3",
            Clause::Remark2_4 => "2.4",
            Clause::Thm3_1 => "3.1",
            Clause::Thm4_2i => "4.2(i)",
            Clause::Thm4_2ii => "4.2(ii)",
            Clause::Thm4_2iii => "4.2(iii)",
            Clause::Thm4_3i => "4.3(i)",
            Clause::Thm4_3ii => "4.3(ii)",
            Clause::Thm4_3iii => "4.3(iii)",
            Clause::Thm4_4iii => "4.4(iii)",
            Clause::Cor4_5 => "4.5",
            Clause::Thm5_1 => "5.1",
            Clause::Thm5_2i => "5.2(i)",
            Clause::Thm5_2ii => "5.2(ii)",
            Clause::Thm5_2iii => "5.2(iii)",
        }
    }

    /// Long form used in human-readable output.
    pub fn long_name(self) -> String {
        let kind = match self {
            Clause::Prop2_2 => "Proposition",
            Clause::Remark2_4 => "Remark",
            Clause::Cor4_5 => "Corollary",
            _ => "Theorem",
        };
        format!("{kind} {}", self.tag())
    }
}

impl fmt::Display for Clause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl Serialize for Clause {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(self.tag())
    }
}
