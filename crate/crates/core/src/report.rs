//! Structured verification records, exportable as JSON.

use serde::Serialize;

/// One theorem check on one instance. Bounded-horizon verdicts always carry
/// the horizon and an explicit caveat; a falsified statement is a verdict,
/// not an error.
#[derive(Clone, Debug, Serialize)]
pub struct VerificationReport {
    pub theorem: String,
    pub instance: String,
    pub verdict: String,
    pub witnesses: Vec<String>,
    pub horizon: usize,
    pub caveats: Vec<String>,
}

impl VerificationReport {
    pub fn new(theorem: impl Into<String>, instance: impl Into<String>, horizon: usize) -> Self {
        VerificationReport {
            theorem: theorem.into(),
            instance: instance.into(),
            verdict: String::new(),
            witnesses: Vec::new(),
            horizon,
            caveats: vec![format!("verified up to horizon {horizon}, not a proof")],
        }
    }

    pub fn verdict(mut self, v: impl Into<String>) -> Self {
        self.verdict = v.into();
        self
    }

    pub fn witness(mut self, w: impl Into<String>) -> Self {
        self.witnesses.push(w.into());
        self
    }

    pub fn witnesses<I: IntoIterator<Item = String>>(mut self, ws: I) -> Self {
        self.witnesses.extend(ws);
        self
    }

    pub fn caveat(mut self, c: impl Into<String>) -> Self {
        self.caveats.push(c.into());
        self
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn to_text(&self) -> String {
        let mut out = format!(
            "theorem:  {}\ninstance: {}\nverdict:  {}\n",
            self.theorem, self.instance, self.verdict
        );
        if !self.witnesses.is_empty() {
            out.push_str(&format!("witnesses: {}\n", self.witnesses.join(", ")));
        }
        out.push_str(&format!("horizon:  {}\n", self.horizon));
        for c in &self.caveats {
            out.push_str(&format!("caveat:   {c}\n"));
        }
        out
    }
}
