//! Parsers for the compact flag syntaxes.

use std::f64::consts::PI;

use spectator_core::models::ModelKind;
use spectator_core::states::FieldSpec;
use spectator_core::Complex64;

fn number(s: &str) -> Result<f64, String> {
    s.trim().parse::<f64>().map_err(|_| format!("not a number: {s:?}"))
}

/// Plain radians or multiples of pi: `pi`, `pi/4`, `2pi/3`, `2*pi/3`.
pub fn angle(s: &str) -> Result<f64, String> {
    let s = s.trim();
    let Some((coef, rest)) = s.split_once("pi") else {
        return number(s);
    };
    let coef = coef.trim().trim_end_matches('*');
    let coef = if coef.is_empty() { 1.0 } else { number(coef)? };
    let denom = match rest.trim() {
        "" => 1.0,
        r => number(r.strip_prefix('/').ok_or_else(|| format!("bad angle {s:?}"))?)?,
    };
    Ok(coef * PI / denom)
}

pub fn model(s: &str) -> Result<ModelKind, String> {
    match s.trim().to_ascii_lowercase().as_str() {
        "tc" | "tavis_cummings_spectator" => Ok(ModelKind::TavisCummingsSpectator),
        "bs" | "buck_sukumar_spectator" => Ok(ModelKind::BuckSukumarSpectator),
        "sb" | "spin_boson_spectator" => Ok(ModelKind::SpinBosonSpectator),
        other => Err(format!("unknown model {other:?} (expected tc, bs or sb)")),
    }
}

/// `fock:<n>` or `coherent:<re>[,<im>][:<cutoff>]`. The multimode vacuum
/// is assembled from the coupling flags instead.
pub fn field(s: &str) -> Result<FieldSpec, String> {
    let s = s.trim();
    let (kind, rest) = s.split_once(':').unwrap_or((s, ""));
    match kind.to_ascii_lowercase().as_str() {
        "fock" => {
            let n = rest
                .trim()
                .parse::<usize>()
                .map_err(|_| format!("bad photon number in {s:?}"))?;
            Ok(FieldSpec::Fock { n })
        }
        "coherent" => {
            let (amp, cutoff) = rest.split_once(':').unwrap_or((rest, ""));
            let (re, im) = amp.split_once(',').unwrap_or((amp, "0"));
            let cutoff = match cutoff.trim() {
                "" => 0,
                c => c.parse::<usize>().map_err(|_| format!("bad cutoff in {s:?}"))?,
            };
            Ok(FieldSpec::Coherent {
                alpha: Complex64::new(number(re)?, number(im)?),
                cutoff,
            })
        }
        _ => Err(format!("unknown field {s:?} (expected fock:<n> or coherent:<re>[,<im>][:<cutoff>])")),
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct TimeGrid(pub Vec<f64>);

/// `start:stop:step`: `start, start + step, ...` below `stop`, then `stop`
/// itself.
pub fn grid(s: &str) -> Result<TimeGrid, String> {
    let parts: Vec<&str> = s.split(':').collect();
    let [start, stop, step] = parts.as_slice() else {
        return Err(format!("grid {s:?} is not start:stop:step"));
    };
    let (start, stop, step) = (number(start)?, number(stop)?, number(step)?);
    if !(step > 0.0 && stop >= start && step.is_finite() && stop.is_finite()) {
        return Err(format!("grid {s:?} needs step > 0 and stop >= start"));
    }
    let mut out = Vec::new();
    let mut k = 0usize;
    loop {
        let t = start + k as f64 * step;
        if t >= stop - 1e-9 * step {
            break;
        }
        out.push(t);
        k += 1;
    }
    out.push(stop);
    Ok(TimeGrid(out))
}

/// `lo:hi`.
pub fn interval(s: &str) -> Result<(f64, f64), String> {
    let (lo, hi) = s.split_once(':').ok_or_else(|| format!("range {s:?} is not lo:hi"))?;
    Ok((number(lo)?, number(hi)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_4, FRAC_PI_6};

    #[test]
    fn angles() {
        assert_eq!(angle("0.5").unwrap(), 0.5);
        assert_eq!(angle("pi/4").unwrap(), FRAC_PI_4);
        assert!((angle("pi/6").unwrap() - FRAC_PI_6).abs() < 1e-15);
        assert_eq!(angle("pi").unwrap(), PI);
        assert!((angle("2*pi/3").unwrap() - 2.0 * PI / 3.0).abs() < 1e-15);
        assert!(angle("pi4").is_err());
        assert!(angle("tau").is_err());
    }

    #[test]
    fn fields() {
        assert_eq!(field("fock:3").unwrap(), FieldSpec::Fock { n: 3 });
        assert_eq!(
            field("coherent:2").unwrap(),
            FieldSpec::Coherent { alpha: Complex64::new(2.0, 0.0), cutoff: 0 }
        );
        assert_eq!(
            field("coherent:1.5,-0.5:40").unwrap(),
            FieldSpec::Coherent { alpha: Complex64::new(1.5, -0.5), cutoff: 40 }
        );
        assert!(field("fock:-1").is_err());
        assert!(field("thermal:2").is_err());
    }

    #[test]
    #[allow(clippy::approx_constant)]
    fn grids_snap_to_stop() {
        let g = grid("0:6.283:0.01").unwrap().0;
        assert_eq!(g.len(), 630);
        assert_eq!(*g.last().unwrap(), 6.283);
        assert!(g[628] < 6.283 && g[628] > 6.27);
        assert_eq!(grid("0:1:0.25").unwrap().0, vec![0.0, 0.25, 0.5, 0.75, 1.0]);
        assert_eq!(grid("2:2:0.1").unwrap().0, vec![2.0]);
        assert!(grid("1:0:0.1").is_err());
        assert!(grid("0:1:0").is_err());
        assert!(grid("0:1").is_err());
    }

    #[test]
    fn models() {
        assert_eq!(model("TC").unwrap(), ModelKind::TavisCummingsSpectator);
        assert_eq!(model("sb").unwrap(), ModelKind::SpinBosonSpectator);
        assert!(model("jc").is_err());
    }
}
