use std::io::Write;

use stabcorr_core::Norm;

/// One cell of a convergence study. `error == None` marks a blown-up run.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceRecord {
    pub scheme: String,
    pub theta: f64,
    pub dt: f64,
    pub h: f64,
    pub norm: Norm,
    pub error: Option<f64>,
    pub order: Option<f64>,
}

impl ConvergenceRecord {
    fn series_key(&self) -> (&str, u64, Norm) {
        (&self.scheme, self.theta.to_bits(), self.norm)
    }
}

/// `log(e_prev / e) / log(dt_prev / dt)` for consecutive entries; `None` for the first entry
/// and wherever either error is missing or zero.
pub fn observed_orders(dts: &[f64], errors: &[Option<f64>]) -> Vec<Option<f64>> {
    assert_eq!(dts.len(), errors.len());
    (0..errors.len())
        .map(|k| {
            if k == 0 {
                return None;
            }
            match (errors[k - 1], errors[k]) {
                (Some(a), Some(b)) if a > 0.0 && b > 0.0 && dts[k - 1] != dts[k] => {
                    Some((a / b).ln() / (dts[k - 1] / dts[k]).ln())
                }
                _ => None,
            }
        })
        .collect()
}

/// Fills `order` within each (scheme, theta, norm) series, in record order.
pub fn fill_orders(records: &mut [ConvergenceRecord]) {
    let mut keys: Vec<(String, u64, Norm)> = Vec::new();
    for r in records.iter() {
        let (s, t, n) = r.series_key();
        if !keys.iter().any(|k| k.0 == s && k.1 == t && k.2 == n) {
            keys.push((s.to_string(), t, n));
        }
    }
    for key in keys {
        let idx: Vec<usize> = (0..records.len())
            .filter(|&i| {
                let (s, t, n) = records[i].series_key();
                s == key.0 && t == key.1 && n == key.2
            })
            .collect();
        let dts: Vec<f64> = idx.iter().map(|&i| records[i].dt).collect();
        let errs: Vec<Option<f64>> = idx.iter().map(|&i| records[i].error).collect();
        for (&i, o) in idx.iter().zip(observed_orders(&dts, &errs)) {
            records[i].order = o;
        }
    }
}

/// Records of one series, in order.
pub fn series<'a>(
    records: &'a [ConvergenceRecord],
    scheme: &str,
    norm: Norm,
) -> Vec<&'a ConvergenceRecord> {
    records
        .iter()
        .filter(|r| r.scheme == scheme && r.norm == norm)
        .collect()
}

/// CSV `scheme,theta,dt,h,norm,error,order`.
pub fn write_convergence_csv<W: Write>(records: &[ConvergenceRecord], out: W) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["scheme", "theta", "dt", "h", "norm", "error", "order"])?;
    for r in records {
        let error = r.error.map_or_else(|| "unstable".to_string(), |e| format!("{e}"));
        let order = r.order.map(|o| format!("{o}")).unwrap_or_default();
        w.write_record([
            r.scheme.clone(),
            format!("{}", r.theta),
            format!("{}", r.dt),
            format!("{}", r.h),
            r.norm.id().to_string(),
            error,
            order,
        ])?;
    }
    w.flush()?;
    Ok(())
}
