//! Sampled complex transfer functions and their export formats.

use num_complex::Complex64;
use std::io::Write;

use crate::error::{Error, Result};

/// A uniformly sampled complex spectrum S(ω).
///
/// The grid is stored as a carrier plus offsets. At optical carriers a
/// f64 absolute frequency has a granularity of ~0.25 rad/s, so a grid of
/// absolute values could never be uniform to one part in 1e9 for MHz
/// spans; the split representation keeps the uniformity exact where it
/// matters and the absolute values available for export.
#[derive(Debug, Clone)]
pub struct ComplexSpectrum {
    center: f64,
    offsets: Vec<f64>,
    values: Vec<Complex64>,
}

impl ComplexSpectrum {
    /// Build from a center, offset grid and values; offsets must be
    /// strictly increasing and uniform to one part in 1e9.
    pub fn new(center: f64, offsets: Vec<f64>, values: Vec<Complex64>) -> Result<Self> {
        if offsets.len() != values.len() {
            return Err(Error::InvalidModel(
                "spectrum grid and value counts differ".into(),
            ));
        }
        if offsets.len() < 2 {
            return Err(Error::InvalidModel("spectrum needs at least 2 points".into()));
        }
        let step = offsets[1] - offsets[0];
        if step <= 0.0 {
            return Err(Error::InvalidModel("spectrum grid must be increasing".into()));
        }
        for w in offsets.windows(2) {
            let s = w[1] - w[0];
            if (s - step).abs() > 1e-9 * step {
                return Err(Error::InvalidModel(
                    "spectrum grid must be uniform to 1e-9".into(),
                ));
            }
        }
        Ok(ComplexSpectrum {
            center,
            offsets,
            values,
        })
    }

    /// Symmetric uniform offsets spanning ±span/2 with n points.
    pub fn symmetric_offsets(span: f64, n: usize) -> Vec<f64> {
        assert!(n >= 2);
        let step = span / (n - 1) as f64;
        (0..n).map(|i| step * i as f64 - span / 2.0).collect()
    }

    pub fn center(&self) -> f64 {
        self.center
    }

    pub fn offsets(&self) -> &[f64] {
        &self.offsets
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    /// Absolute angular frequency of sample i.
    pub fn omega_at(&self, i: usize) -> f64 {
        self.center + self.offsets[i]
    }

    pub fn len(&self) -> usize {
        self.offsets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.offsets.is_empty()
    }

    pub fn step(&self) -> f64 {
        self.offsets[1] - self.offsets[0]
    }

    /// |S(ω)|² samples.
    pub fn intensity(&self) -> Vec<f64> {
        self.values.iter().map(|v| v.norm_sqr()).collect()
    }

    /// CSV emission: metadata as `#` comment lines, then
    /// `omega_hz,re_S,im_S,abs2_S` rows with frequencies in Hz.
    pub fn write_csv<W: Write>(&self, mut w: W, metadata: &[(String, String)]) -> Result<()> {
        for (k, v) in metadata {
            writeln!(w, "# {k} = {v}")?;
        }
        writeln!(w, "omega_hz,re_S,im_S,abs2_S")?;
        for (i, s) in self.values.iter().enumerate() {
            writeln!(
                w,
                "{},{},{},{}",
                crate::angular_to_hz(self.omega_at(i)),
                s.re,
                s.im,
                s.norm_sqr()
            )?;
        }
        Ok(())
    }

    /// JSON emission mirroring the CSV field names.
    pub fn write_json<W: Write>(&self, mut w: W, metadata: &[(String, String)]) -> Result<()> {
        let meta: serde_json::Map<String, serde_json::Value> = metadata
            .iter()
            .map(|(k, v)| (k.clone(), serde_json::Value::String(v.clone())))
            .collect();
        let points: Vec<serde_json::Value> = self
            .values
            .iter()
            .enumerate()
            .map(|(i, s)| {
                serde_json::json!({
                    "omega_hz": crate::angular_to_hz(self.omega_at(i)),
                    "re_S": s.re,
                    "im_S": s.im,
                    "abs2_S": s.norm_sqr(),
                })
            })
            .collect();
        let doc = serde_json::json!({ "metadata": meta, "points": points });
        serde_json::to_writer_pretty(&mut w, &doc)?;
        writeln!(w)?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_nonuniform_grid() {
        let offsets = vec![1.0, 2.0, 3.5];
        let values = vec![Complex64::default(); 3];
        assert!(ComplexSpectrum::new(0.0, offsets, values).is_err());
    }

    #[test]
    fn symmetric_offsets_are_uniform_at_optical_carrier() {
        // The representation must stay exactly uniform even when the
        // carrier is 9 orders of magnitude above the span.
        let offsets = ComplexSpectrum::symmetric_offsets(2.0 * std::f64::consts::PI * 6e6, 4001);
        let vals = vec![Complex64::new(1.0, 0.0); 4001];
        let s = ComplexSpectrum::new(1.7e15, offsets, vals).unwrap();
        assert!(s.omega_at(0) < s.omega_at(4000));
    }

    #[test]
    fn csv_has_pinned_header() {
        let offsets = ComplexSpectrum::symmetric_offsets(2.0, 3);
        let s = ComplexSpectrum::new(
            2.0 * std::f64::consts::PI * 100.0,
            offsets,
            vec![Complex64::new(0.5, -0.25); 3],
        )
        .unwrap();
        let mut buf = Vec::new();
        s.write_csv(&mut buf, &[("tool".into(), "test".into())]).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next().unwrap(), "# tool = test");
        assert_eq!(lines.next().unwrap(), "omega_hz,re_S,im_S,abs2_S");
        let first = lines.next().unwrap();
        assert!(first.starts_with("99.84"), "{first}");
    }
}
