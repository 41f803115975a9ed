use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum InequalityId {
    /// `G(K) <= n! vol(K) + n`.
    #[serde(rename = "BLICHFELDT_1_1")]
    Blichfeldt11,
    /// `G(K) < vol(K) + (sqrt(n)+1)/2 (n-1)! F(K)`.
    #[serde(rename = "MAIN_THM_1_1")]
    MainThm11,
    /// `G(K) < vol(K) + 2 F(K)` in dimension three.
    #[serde(rename = "DIM3_THM_1_2")]
    Dim3Thm12,
    /// `vol(K) - F(K)/2 < G(K)`.
    #[serde(rename = "BHW_LOWER_1_2")]
    BhwLower12,
    /// `G(t+P) <= n! vol(P)` for `t` outside the lattice.
    #[serde(rename = "TRANSLATE_LEMMA_1_3")]
    Translate13,
    /// `#(K ∩ Λ) <= n! vol(K)/det Λ + n`.
    #[serde(rename = "GENERAL_1_3_i")]
    General13i,
    /// `#((t+P) ∩ Λ) <= n! vol(P)/det Λ`.
    #[serde(rename = "GENERAL_1_3_ii")]
    General13ii,
    /// `#(K ∩ Λ) < vol(K)/det Λ + (n-1)! F(K)/det Λ_{n-1}`.
    #[serde(rename = "CONJECTURE_1_4")]
    Conjecture14,
    /// `G(K) <= V0 + ... + Vn`, here for n = 3.
    #[serde(rename = "WILLS_3_2")]
    Wills32,
    /// `G(K) <= V3 + V2 + V1 + 1` in dimension three.
    #[serde(rename = "OVERHAGEN_3_3")]
    Overhagen33,
    /// `G(P) - G(P ⊖ 3^(-1/2) B) <= F(P) + 2` with `P = conv(K ∩ Z^3)`.
    #[serde(rename = "MCMULLEN_SHELL")]
    McMullenShell,
    /// `G(K) <= vol(K + kappa_3^(-1/3) B)`.
    #[serde(rename = "BOKOWSKI_3_4")]
    Bokowski34,
    /// `G(K) < vol(K) + (rho_3 + 1/2) (n-1)! F(K)` in dimension three.
    #[serde(rename = "SKETCH_RHO_HALF")]
    SketchRhoHalf,
    /// `G(K) <= vol/det Λ + (mu(Λ) λ₁(Λ*) + 1) (n-1)! F/det Λ_{n-1}`.
    #[serde(rename = "GENERAL_THM_4_1")]
    GeneralThm41,
}

impl InequalityId {
    pub const ALL: [InequalityId; 14] = [
        InequalityId::Blichfeldt11,
        InequalityId::MainThm11,
        InequalityId::Dim3Thm12,
        InequalityId::BhwLower12,
        InequalityId::Translate13,
        InequalityId::General13i,
        InequalityId::General13ii,
        InequalityId::Conjecture14,
        InequalityId::Wills32,
        InequalityId::Overhagen33,
        InequalityId::McMullenShell,
        InequalityId::Bokowski34,
        InequalityId::SketchRhoHalf,
        InequalityId::GeneralThm41,
    ];

    pub fn name(&self) -> &'static str {
        use InequalityId::*;
        match self {
            Blichfeldt11 => "BLICHFELDT_1_1",
            MainThm11 => "MAIN_THM_1_1",
            Dim3Thm12 => "DIM3_THM_1_2",
            BhwLower12 => "BHW_LOWER_1_2",
            Translate13 => "TRANSLATE_LEMMA_1_3",
            General13i => "GENERAL_1_3_i",
            General13ii => "GENERAL_1_3_ii",
            Conjecture14 => "CONJECTURE_1_4",
            Wills32 => "WILLS_3_2",
            Overhagen33 => "OVERHAGEN_3_3",
            McMullenShell => "MCMULLEN_SHELL",
            Bokowski34 => "BOKOWSKI_3_4",
            SketchRhoHalf => "SKETCH_RHO_HALF",
            GeneralThm41 => "GENERAL_THM_4_1",
        }
    }

    pub fn is_strict(&self) -> bool {
        use InequalityId::*;
        matches!(self, MainThm11 | Dim3Thm12 | BhwLower12 | Conjecture14 | SketchRhoHalf)
    }

    /// Conjectures and known-false statements; violations are findings.
    pub fn is_observational(&self) -> bool {
        matches!(self, InequalityId::Conjecture14 | InequalityId::Wills32)
    }

    pub fn label(&self) -> Option<&'static str> {
        match self {
            InequalityId::Conjecture14 | InequalityId::Wills32 => Some("conjecture/observational"),
            InequalityId::SketchRhoHalf => Some("proof sketch only"),
            _ => None,
        }
    }

    pub fn needs_integer_lattice(&self) -> bool {
        use InequalityId::*;
        !matches!(self, General13i | General13ii | Conjecture14 | GeneralThm41)
    }

    pub fn required_dim(&self) -> Option<usize> {
        use InequalityId::*;
        match self {
            Dim3Thm12 | Wills32 | Overhagen33 | McMullenShell | Bokowski34 | SketchRhoHalf => Some(3),
            _ => None,
        }
    }

    pub fn needs_translate(&self) -> bool {
        matches!(self, InequalityId::Translate13 | InequalityId::General13ii)
    }

    pub fn needs_full_lattice_dimension(&self) -> bool {
        use InequalityId::*;
        matches!(
            self,
            Blichfeldt11 | MainThm11 | Dim3Thm12 | General13i | Conjecture14 | McMullenShell | SketchRhoHalf | GeneralThm41
        )
    }
}

impl fmt::Display for InequalityId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for InequalityId {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self, Error> {
        InequalityId::ALL
            .iter()
            .copied()
            .find(|id| id.name().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| {
                let names: Vec<&str> = InequalityId::ALL.iter().map(|i| i.name()).collect();
                Error::Invalid(format!("unknown inequality id {s:?}; expected one of {}", names.join(", ")))
            })
    }
}
