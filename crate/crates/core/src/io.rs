//! CSV formats. Numbers are written with 17 significant digits so that a
//! written file reads back bit-for-bit.

use std::io::{Read, Write};

use crate::constants::ConstantsRow;
use crate::error::{Error, Result};
use crate::heat::DecaySample;
use crate::radial::RadialProfile;
use crate::shooting::SweepEntry;

/// Shortest-exact scientific form; `inf`/`-inf`/`nan` for non-finite values.
pub fn fmt_num(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else if x.is_nan() {
        "nan".into()
    } else if x > 0.0 {
        "inf".into()
    } else {
        "-inf".into()
    }
}

fn writer<W: Write>(w: W) -> csv::Writer<W> {
    csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(w)
}

/// Header `r,u,du` (or `r,u` for profiles without stored slopes).
pub fn write_profile_csv<W: Write>(w: W, u: &RadialProfile) -> Result<()> {
    let mut out = writer(w);
    let slopes = u.has_slopes().then(|| u.slopes());
    match &slopes {
        Some(_) => out.write_record(["r", "u", "du"])?,
        None => out.write_record(["r", "u"])?,
    }
    for (i, (r, v)) in u.knots().zip(u.values()).enumerate() {
        let mut rec = vec![fmt_num(r), fmt_num(*v)];
        if let Some(s) = &slopes {
            rec.push(fmt_num(s[i]));
        }
        out.write_record(&rec)?;
    }
    out.flush()?;
    Ok(())
}

/// Inverse of [`write_profile_csv`]; knots must start at 0 and be uniform.
pub fn read_profile_csv<R: Read>(r: R, d: usize) -> Result<RadialProfile> {
    let mut rdr = csv::Reader::from_reader(r);
    let headers = rdr.headers()?.clone();
    let cols: Vec<&str> = headers.iter().map(str::trim).collect();
    let with_slopes = match cols.as_slice() {
        ["r", "u"] => false,
        ["r", "u", "du"] => true,
        _ => {
            return Err(Error::InvalidProfile(format!(
                "expected header r,u[,du], found {}",
                cols.join(",")
            )))
        }
    };
    let (mut knots, mut values, mut slopes) = (Vec::new(), Vec::new(), Vec::new());
    for (line, rec) in rdr.records().enumerate() {
        let rec = rec?;
        let field = |k: usize| -> Result<f64> {
            rec.get(k)
                .and_then(|s| s.trim().parse().ok())
                .ok_or_else(|| Error::InvalidProfile(format!("bad number in row {}", line + 2)))
        };
        knots.push(field(0)?);
        values.push(field(1)?);
        if with_slopes {
            slopes.push(field(2)?);
        }
    }
    RadialProfile::from_knots(d, &knots, values, with_slopes.then_some(slopes))
}

/// Header `p,h,R,mu,cgn`.
pub fn write_sweep_csv<W: Write>(w: W, rows: &[SweepEntry]) -> Result<()> {
    let mut out = writer(w);
    out.write_record(["p", "h", "R", "mu", "cgn"])?;
    for e in rows {
        out.write_record([e.p, e.h, e.radius, e.mu, e.cgn].map(fmt_num))?;
    }
    out.flush()?;
    Ok(())
}

/// Header `d,lambda1,c_nash,c1,c2,sobolev,lower`; `sobolev` empty for `d ≤ 2`.
pub fn write_figure_csv<W: Write>(w: W, rows: &[ConstantsRow]) -> Result<()> {
    let mut out = writer(w);
    out.write_record(["d", "lambda1", "c_nash", "c1", "c2", "sobolev", "lower"])?;
    for r in rows {
        out.write_record([
            fmt_num(r.d),
            fmt_num(r.lambda1),
            fmt_num(r.c_nash),
            fmt_num(r.c1),
            fmt_num(r.c2),
            r.sobolev.map(fmt_num).unwrap_or_default(),
            fmt_num(r.gaussian_lower),
        ])?;
    }
    out.flush()?;
    Ok(())
}

/// Header `t,l2,nash_env,young_env`.
pub fn write_decay_csv<W: Write>(w: W, rows: &[DecaySample]) -> Result<()> {
    let mut out = writer(w);
    out.write_record(["t", "l2", "nash_env", "young_env"])?;
    for s in rows {
        out.write_record([s.t, s.l2, s.nash_env, s.young_env].map(fmt_num))?;
    }
    out.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfun::optimal_profile;

    #[test]
    fn numbers_round_trip_exactly() {
        for x in [0.1, 1.0 / 3.0, std::f64::consts::PI, 1e-300, 6.02214076e23] {
            assert_eq!(fmt_num(x).parse::<f64>().unwrap(), x);
        }
        assert_eq!(fmt_num(f64::INFINITY), "inf");
    }

    #[test]
    fn profile_csv_round_trip() {
        let u = optimal_profile(2, 65).unwrap();
        let mut buf = Vec::new();
        write_profile_csv(&mut buf, &u).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("r,u,du\n"));
        assert!(!text.contains('\r'));
        let back = read_profile_csv(buf.as_slice(), 2).unwrap();
        assert_eq!(back.values(), u.values());
        assert_eq!(back.slopes(), u.slopes());
    }

    #[test]
    fn profile_csv_rejects_bad_input() {
        assert!(read_profile_csv("x,y\n0,1\n".as_bytes(), 1).is_err());
        assert!(read_profile_csv("r,u\n0,1\n0.5,oops\n".as_bytes(), 1).is_err());
        assert!(read_profile_csv("r,u\n0,1\n0.5,0.5\n2,0\n".as_bytes(), 1).is_err());
    }

    #[test]
    fn figure_csv_leaves_sobolev_empty_in_low_dimension() {
        let rows = crate::constants::figure_data(2.0, 3.0, 2).unwrap();
        let mut buf = Vec::new();
        write_figure_csv(&mut buf, &rows).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "d,lambda1,c_nash,c1,c2,sobolev,lower");
        assert_eq!(lines[1].split(',').nth(5), Some(""));
        assert_ne!(lines[2].split(',').nth(5), Some(""));
    }
}
