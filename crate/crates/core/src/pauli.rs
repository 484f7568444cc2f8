//! Exact symbolic algebra of the n-qubit Pauli group.
//!
//! Text format: an optional sign (`+` or `-`), an optional `i`, then one
//! uppercase letter per wire. The leftmost letter is wire 0.

use std::fmt;
use std::ops::{Mul, MulAssign, Neg};
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PauliError {
    #[error("pauli strings have different lengths: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },
    #[error("invalid pauli string at byte {offset}: {reason}")]
    Parse { offset: usize, reason: &'static str },
}

/// A single-qubit Pauli letter.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PauliLetter {
    I,
    X,
    Y,
    Z,
}

impl PauliLetter {
    pub const ALL: [PauliLetter; 4] = [PauliLetter::I, PauliLetter::X, PauliLetter::Y, PauliLetter::Z];

    pub fn is_identity(self) -> bool {
        self == PauliLetter::I
    }

    pub fn as_char(self) -> char {
        match self {
            PauliLetter::I => 'I',
            PauliLetter::X => 'X',
            PauliLetter::Y => 'Y',
            PauliLetter::Z => 'Z',
        }
    }

    pub fn from_char(c: char) -> Option<Self> {
        match c {
            'I' => Some(PauliLetter::I),
            'X' => Some(PauliLetter::X),
            'Y' => Some(PauliLetter::Y),
            'Z' => Some(PauliLetter::Z),
            _ => None,
        }
    }

    /// Index in the cyclic order X -> Y -> Z, or `None` for the identity.
    fn cyclic_index(self) -> Option<u8> {
        match self {
            PauliLetter::I => None,
            PauliLetter::X => Some(0),
            PauliLetter::Y => Some(1),
            PauliLetter::Z => Some(2),
        }
    }

    fn from_cyclic_index(k: u8) -> Self {
        match k % 3 {
            0 => PauliLetter::X,
            1 => PauliLetter::Y,
            _ => PauliLetter::Z,
        }
    }

    /// Returns `(phase, letter)` with `self * other == phase * letter` as 2x2 matrices.
    pub fn times(self, other: PauliLetter) -> (Phase, PauliLetter) {
        match (self.cyclic_index(), other.cyclic_index()) {
            (None, _) => (Phase::ONE, other),
            (_, None) => (Phase::ONE, self),
            (Some(a), Some(b)) if a == b => (Phase::ONE, PauliLetter::I),
            (Some(a), Some(b)) => {
                // XY = iZ, YZ = iX, ZX = iY; reversed order picks up -i.
                let third = PauliLetter::from_cyclic_index(3 - a - b);
                if (a + 1) % 3 == b {
                    (Phase::I, third)
                } else {
                    (Phase::MINUS_I, third)
                }
            }
        }
    }

    /// Whether the two letters commute as matrices.
    pub fn commutes_with(self, other: PauliLetter) -> bool {
        self.is_identity() || other.is_identity() || self == other
    }
}

impl fmt::Display for PauliLetter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_char())
    }
}

/// A fourth root of unity `i^exponent`, stored as the exponent mod 4.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct Phase(u8);

impl Phase {
    pub const ONE: Phase = Phase(0);
    pub const I: Phase = Phase(1);
    pub const MINUS_ONE: Phase = Phase(2);
    pub const MINUS_I: Phase = Phase(3);

    pub fn from_exponent(exponent: i64) -> Self {
        Phase(exponent.rem_euclid(4) as u8)
    }

    pub fn exponent(self) -> u8 {
        self.0
    }

    /// True for `+1` and `-1`.
    pub fn is_real(self) -> bool {
        self.0.is_multiple_of(2)
    }

    pub fn conj(self) -> Self {
        Phase::from_exponent(-(self.0 as i64))
    }

    /// `+1` or `-1` for real phases.
    pub fn sign(self) -> Option<i64> {
        match self.0 {
            0 => Some(1),
            2 => Some(-1),
            _ => None,
        }
    }

    pub fn prefix(self) -> &'static str {
        match self.0 {
            0 => "+",
            1 => "+i",
            2 => "-",
            _ => "-i",
        }
    }

    fn from_prefix(s: &str) -> Option<Self> {
        match s {
            "+" | "" => Some(Phase::ONE),
            "+i" | "i" => Some(Phase::I),
            "-" => Some(Phase::MINUS_ONE),
            "-i" => Some(Phase::MINUS_I),
            _ => None,
        }
    }
}

impl Mul for Phase {
    type Output = Phase;
    fn mul(self, rhs: Phase) -> Phase {
        Phase((self.0 + rhs.0) % 4)
    }
}

impl MulAssign for Phase {
    fn mul_assign(&mut self, rhs: Phase) {
        *self = *self * rhs;
    }
}

impl Neg for Phase {
    type Output = Phase;
    fn neg(self) -> Phase {
        self * Phase::MINUS_ONE
    }
}

impl fmt::Display for Phase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.prefix())
    }
}

impl FromStr for Phase {
    type Err = PauliError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Phase::from_prefix(s).ok_or(PauliError::Parse {
            offset: 0,
            reason: "expected one of +, +i, -, -i",
        })
    }
}

impl Serialize for Phase {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(self.prefix())
    }
}

impl<'de> Deserialize<'de> for Phase {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// An element of the n-qubit Pauli group: a phase times a tensor product of letters.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PauliString {
    phase: Phase,
    letters: Vec<PauliLetter>,
}

impl PauliString {
    pub fn new(phase: Phase, letters: Vec<PauliLetter>) -> Self {
        PauliString { phase, letters }
    }

    pub fn identity(n: usize) -> Self {
        PauliString::new(Phase::ONE, vec![PauliLetter::I; n])
    }

    /// The string with `letter` on `wire` and identity elsewhere.
    pub fn single(n: usize, wire: usize, letter: PauliLetter) -> Self {
        let mut letters = vec![PauliLetter::I; n];
        letters[wire] = letter;
        PauliString::new(Phase::ONE, letters)
    }

    pub fn phase(&self) -> Phase {
        self.phase
    }

    pub fn letters(&self) -> &[PauliLetter] {
        &self.letters
    }

    pub fn letter(&self, wire: usize) -> PauliLetter {
        self.letters[wire]
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn with_phase(mut self, phase: Phase) -> Self {
        self.phase = phase;
        self
    }

    /// Same letters, phase reset to `+1`.
    pub fn unsigned(&self) -> Self {
        PauliString::new(Phase::ONE, self.letters.clone())
    }

    pub(crate) fn set_letter(&mut self, wire: usize, letter: PauliLetter) {
        self.letters[wire] = letter;
    }

    pub(crate) fn multiply_phase(&mut self, phase: Phase) {
        self.phase *= phase;
    }

    /// Number of non-identity letters.
    pub fn weight(&self) -> usize {
        self.letters.iter().filter(|l| !l.is_identity()).count()
    }

    pub fn is_identity_up_to_phase(&self) -> bool {
        self.weight() == 0
    }

    /// Hermitian iff the phase is `+1` or `-1`.
    pub fn is_hermitian(&self) -> bool {
        self.phase.is_real()
    }

    /// Letters rendered without the phase prefix.
    pub fn letters_text(&self) -> String {
        self.letters.iter().map(|l| l.as_char()).collect()
    }

    pub fn try_mul(&self, other: &PauliString) -> Result<PauliString, PauliError> {
        if self.len() != other.len() {
            return Err(PauliError::LengthMismatch {
                left: self.len(),
                right: other.len(),
            });
        }
        let mut phase = self.phase * other.phase;
        let letters = self
            .letters
            .iter()
            .zip(&other.letters)
            .map(|(&a, &b)| {
                let (p, l) = a.times(b);
                phase *= p;
                l
            })
            .collect();
        Ok(PauliString::new(phase, letters))
    }

    pub fn commutes_with(&self, other: &PauliString) -> Result<bool, PauliError> {
        if self.len() != other.len() {
            return Err(PauliError::LengthMismatch {
                left: self.len(),
                right: other.len(),
            });
        }
        let anti = self
            .letters
            .iter()
            .zip(&other.letters)
            .filter(|(a, b)| !a.commutes_with(**b))
            .count();
        Ok(anti % 2 == 0)
    }
}

/// Parses the text grammar `["+"|"-"]["i"]?[IXYZ]+`.
pub fn parse_pauli(text: &str) -> Result<PauliString, PauliError> {
    let bytes = text.as_bytes();
    let mut pos = 0;
    let mut phase = Phase::ONE;
    match bytes.first() {
        Some(b'+') => pos = 1,
        Some(b'-') => {
            phase = Phase::MINUS_ONE;
            pos = 1;
        }
        _ => {}
    }
    if bytes.get(pos) == Some(&b'i') {
        phase *= Phase::I;
        pos += 1;
    }
    if pos == bytes.len() {
        return Err(PauliError::Parse {
            offset: pos,
            reason: "expected at least one letter",
        });
    }
    let mut letters = Vec::with_capacity(bytes.len() - pos);
    for (offset, c) in text.char_indices().skip_while(|(o, _)| *o < pos) {
        match PauliLetter::from_char(c) {
            Some(l) => letters.push(l),
            None => {
                return Err(PauliError::Parse {
                    offset,
                    reason: "expected one of I, X, Y, Z",
                })
            }
        }
    }
    Ok(PauliString::new(phase, letters))
}

impl FromStr for PauliString {
    type Err = PauliError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_pauli(s)
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.phase.prefix())?;
        for l in &self.letters {
            write!(f, "{}", l)?;
        }
        Ok(())
    }
}

impl Serialize for PauliString {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for PauliString {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Panics on length mismatch; use [`PauliString::try_mul`] for a checked product.
impl Mul for &PauliString {
    type Output = PauliString;
    fn mul(self, rhs: &PauliString) -> PauliString {
        self.try_mul(rhs).expect("pauli string length mismatch")
    }
}

#[cfg(test)]
mod tests {
    use super::PauliLetter::*;
    use super::*;

    fn p(s: &str) -> PauliString {
        s.parse().unwrap()
    }

    #[test]
    fn letter_products() {
        assert_eq!(X.times(X), (Phase::ONE, I));
        assert_eq!(I.times(Z), (Phase::ONE, Z));
        assert_eq!(X.times(Y), (Phase::I, Z));
        assert_eq!(Y.times(X), (Phase::MINUS_I, Z));
        assert_eq!(Z.times(X), (Phase::I, Y));
        assert_eq!(X.times(Z), (Phase::MINUS_I, Y));
    }

    #[test]
    fn letter_mul_is_associative_with_phases() {
        for a in PauliLetter::ALL {
            for b in PauliLetter::ALL {
                for c in PauliLetter::ALL {
                    let (p1, ab) = a.times(b);
                    let (p2, ab_c) = ab.times(c);
                    let (q1, bc) = b.times(c);
                    let (q2, a_bc) = a.times(bc);
                    assert_eq!(ab_c, a_bc);
                    assert_eq!(p1 * p2, q1 * q2, "({a}{b}){c} vs {a}({b}{c})");
                }
            }
        }
    }

    #[test]
    fn string_products() {
        assert_eq!(&p("+XX") * &p("+ZZ"), p("-YY"));
        assert_eq!(&p("+II") * &p("-iXY"), p("-iXY"));
        assert_eq!(&p("+Z") * &p("+Z"), p("+I"));
        assert_eq!(
            p("XI").try_mul(&p("X")),
            Err(PauliError::LengthMismatch { left: 2, right: 1 })
        );
    }

    #[test]
    fn parse_examples() {
        let s = p("-iYY");
        assert_eq!(s.phase().exponent(), 3);
        assert_eq!(s.letters(), &[Y, Y]);
        let s = p("+XIZ");
        assert_eq!(s.phase().exponent(), 0);
        assert_eq!(s.letters(), &[X, I, Z]);
        assert_eq!(p("iX").phase(), Phase::I);
        assert_eq!(p("-X").phase(), Phase::MINUS_ONE);
    }

    #[test]
    fn parse_errors_report_offsets() {
        assert_eq!(
            parse_pauli("XYZW"),
            Err(PauliError::Parse {
                offset: 3,
                reason: "expected one of I, X, Y, Z"
            })
        );
        assert!(matches!(parse_pauli(""), Err(PauliError::Parse { offset: 0, .. })));
        assert!(matches!(parse_pauli("-i"), Err(PauliError::Parse { offset: 2, .. })));
        assert!(matches!(parse_pauli("+x"), Err(PauliError::Parse { offset: 1, .. })));
        assert!(matches!(parse_pauli("X-"), Err(PauliError::Parse { offset: 1, .. })));
        assert!(matches!(parse_pauli("+Xé"), Err(PauliError::Parse { offset: 2, .. })));
    }

    #[test]
    fn canonical_display() {
        assert_eq!(p("XX").to_string(), "+XX");
        assert_eq!(p("iZ").to_string(), "+iZ");
        assert_eq!(p("-iYY").to_string(), "-iYY");
    }

    #[test]
    fn commutation() {
        assert!(p("XX").commutes_with(&p("ZZ")).unwrap());
        assert!(!p("XI").commutes_with(&p("ZI")).unwrap());
        assert!(p("XI").commutes_with(&p("IZ")).unwrap());
    }

    #[test]
    fn group_order_on_two_wires() {
        use std::collections::HashSet;
        let mut elems = HashSet::new();
        for e in 0..4 {
            for a in PauliLetter::ALL {
                for b in PauliLetter::ALL {
                    elems.insert(PauliString::new(Phase::from_exponent(e), vec![a, b]));
                }
            }
        }
        // closed under multiplication, order 4 * 4^2
        let all: Vec<_> = elems.iter().cloned().collect();
        for x in &all {
            for y in &all {
                assert!(elems.contains(&(x * y)));
            }
        }
        assert_eq!(elems.len(), 4 * 16);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        pub(super) fn letter() -> impl Strategy<Value = PauliLetter> {
            prop::sample::select(PauliLetter::ALL.to_vec())
        }

        fn string(n: usize) -> impl Strategy<Value = PauliString> {
            (0..4i64, prop::collection::vec(letter(), n))
                .prop_map(|(e, ls)| PauliString::new(Phase::from_exponent(e), ls))
        }

        proptest! {
            #[test]
            fn squares_are_plus_minus_identity(s in (1usize..10).prop_flat_map(string)) {
                let sq = &s * &s;
                prop_assert!(sq.is_identity_up_to_phase());
                prop_assert!(sq.phase().is_real());
            }

            #[test]
            fn text_round_trip(s in (1usize..10).prop_flat_map(string)) {
                prop_assert_eq!(parse_pauli(&s.to_string()).unwrap(), s);
            }

            #[test]
            fn string_mul_is_associative(
                (a, b, c) in (1usize..6).prop_flat_map(|n| (string(n), string(n), string(n)))
            ) {
                prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            }
        }
    }
}
