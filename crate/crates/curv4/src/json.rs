//! Wire formats.
//!
//! * `curv4/tensor-v1`: `{"components": [{"i": 1, "j": 2, "k": 1, "l": 2,
//!   "v": -1.0}, ...]}` with 1-based indices in an implied orthonormal
//!   frame; parsing symmetrizes and validates.
//! * `curv4/spectrum-v1`: `{"lambda": [...], "mu": [...], "rho": ...}`.
//! * `curv4/report-v1`: a list of inequality reports.

use serde::{Deserialize, Serialize};

use crate::error::{CurvError, Result};
use crate::spectrum::SingerThorpeSpectrum;
use crate::tensor::CurvatureTensor;

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TensorComponent {
    pub i: usize,
    pub j: usize,
    pub k: usize,
    pub l: usize,
    pub v: f64,
}

/// `curv4/tensor-v1`
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TensorV1 {
    pub components: Vec<TensorComponent>,
}

impl TensorV1 {
    pub fn from_tensor(t: &CurvatureTensor) -> Self {
        TensorV1 {
            components: t
                .canonical_components()
                .into_iter()
                .map(|(i, j, k, l, v)| TensorComponent { i, j, k, l, v })
                .collect(),
        }
    }

    pub fn to_tensor(&self) -> Result<CurvatureTensor> {
        let entries: Vec<(usize, usize, usize, usize, f64)> =
            self.components.iter().map(|c| (c.i, c.j, c.k, c.l, c.v)).collect();
        CurvatureTensor::from_components(&entries)
    }
}

/// `curv4/spectrum-v1`
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpectrumV1 {
    pub lambda: [f64; 3],
    pub mu: [f64; 3],
    pub rho: f64,
}

impl SpectrumV1 {
    pub fn from_spectrum(s: &SingerThorpeSpectrum) -> Self {
        SpectrumV1 { lambda: s.lambda(), mu: s.mu(), rho: s.rho() }
    }

    pub fn to_spectrum(&self) -> Result<SingerThorpeSpectrum> {
        SingerThorpeSpectrum::new(self.lambda, self.mu, self.rho)
    }
}

/// Either input format, sniffed by its fields.
#[derive(Clone, Debug)]
pub enum ParsedInput {
    Tensor(Box<CurvatureTensor>),
    Spectrum(SingerThorpeSpectrum),
}

impl ParsedInput {
    /// The tensor either way (spectra expand through the normal form).
    pub fn tensor(&self) -> CurvatureTensor {
        match self {
            ParsedInput::Tensor(t) => (**t).clone(),
            ParsedInput::Spectrum(s) => CurvatureTensor::from_singer_thorpe(s),
        }
    }
}

/// Parses a `tensor-v1` or `spectrum-v1` document.
pub fn parse_input(text: &str) -> Result<ParsedInput> {
    let value: serde_json::Value =
        serde_json::from_str(text).map_err(|e| CurvError::MalformedInput(e.to_string()))?;
    let obj = value
        .as_object()
        .ok_or_else(|| CurvError::MalformedInput("expected a JSON object".into()))?;
    if obj.contains_key("components") {
        let doc: TensorV1 = serde_json::from_value(value.clone())
            .map_err(|e| CurvError::MalformedInput(format!("tensor-v1: {e}")))?;
        Ok(ParsedInput::Tensor(Box::new(doc.to_tensor()?)))
    } else if obj.contains_key("lambda") {
        let doc: SpectrumV1 = serde_json::from_value(value.clone())
            .map_err(|e| CurvError::MalformedInput(format!("spectrum-v1: {e}")))?;
        Ok(ParsedInput::Spectrum(doc.to_spectrum()?))
    } else {
        Err(CurvError::MalformedInput(
            "object has neither \"components\" (tensor-v1) nor \"lambda\" (spectrum-v1)".into(),
        ))
    }
}
