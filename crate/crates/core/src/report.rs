//! Pass/fail records shared by the verification suites.

use serde::Serialize;

/// One checked claim of a verification run.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Claim {
    pub name: String,
    pub passed: bool,
    /// How many instances were examined.
    pub checked: u64,
    pub counterexample: Option<String>,
    /// Data worth showing even when the claim passes.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl Claim {
    pub(crate) fn new(name: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            passed: true,
            checked: 0,
            counterexample: None,
            note: None,
        }
    }

    pub(crate) fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }

    pub(crate) fn check(&mut self, ok: bool, witness: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok && self.passed {
            self.passed = false;
            self.counterexample = Some(witness());
        }
    }
}

/// B(k) together with whether it is prime. Data only.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct LargestOdd {
    pub k: u64,
    pub b: u64,
    pub prime: bool,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct VerificationReport {
    pub claims: Vec<Claim>,
    /// B(k) for k in {0, 2, ..., k_max}, with a primality flag. Only the
    /// class suite fills this.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub largest_odd: Vec<LargestOdd>,
}

impl VerificationReport {
    pub fn all_passed(&self) -> bool {
        self.claims.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Claim> {
        self.claims.iter().filter(|c| !c.passed)
    }
}
