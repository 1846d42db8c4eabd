use std::fs::File;
use std::io::{BufWriter, Read, Write};
use std::path::Path;

use num_complex::Complex64;

use super::evolve::Trajectory;
use crate::error::{Error, Result};
use crate::spectral_core::{make_grid, sobolev_norm, Field1D};

/// Columns `t, mass, hamiltonian, hs_norm(s=..)`; missing Hamiltonians are written as NaN.
pub fn write_trajectory_csv(traj: &Trajectory, path: &Path, s: f64) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(["t", "mass", "hamiltonian", &format!("hs_norm(s={s})")])?;
    for ((t, u), d) in traj.times.iter().zip(&traj.snapshots).zip(&traj.diagnostics) {
        w.write_record([
            format!("{t:.16e}"),
            format!("{:.16e}", d.mass),
            format!("{:.16e}", d.hamiltonian.unwrap_or(f64::NAN)),
            format!("{:.16e}", sobolev_norm(u, s)),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// Little-endian dump: `u64 N`, `f64 L`, `f64 t`, then `N` pairs `(re, im)` of `f64`.
pub fn write_snapshot(path: &Path, u: &Field1D, t: f64) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    w.write_all(&(u.grid().len() as u64).to_le_bytes())?;
    w.write_all(&u.grid().length().to_le_bytes())?;
    w.write_all(&t.to_le_bytes())?;
    for v in u.values() {
        w.write_all(&v.re.to_le_bytes())?;
        w.write_all(&v.im.to_le_bytes())?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_snapshot(path: &Path) -> Result<(Field1D, f64)> {
    let mut bytes = Vec::new();
    File::open(path)?.read_to_end(&mut bytes)?;
    let word = |i: usize| -> Result<[u8; 8]> {
        bytes.get(8 * i..8 * i + 8).and_then(|s| s.try_into().ok()).ok_or_else(|| Error::Format("truncated snapshot".into()))
    };
    let n = u64::from_le_bytes(word(0)?) as usize;
    let len = f64::from_le_bytes(word(1)?);
    let t = f64::from_le_bytes(word(2)?);
    if bytes.len() != 24 + 16 * n {
        return Err(Error::Format(format!("snapshot of {} bytes does not hold {n} points", bytes.len())));
    }
    let mut vals = Vec::with_capacity(n);
    for j in 0..n {
        vals.push(Complex64::new(f64::from_le_bytes(word(3 + 2 * j)?), f64::from_le_bytes(word(4 + 2 * j)?)));
    }
    let g = make_grid(n, len)?;
    Ok((Field1D::new(&g, vals)?, t))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn snapshot_roundtrip() {
        let dir = std::env::temp_dir().join(format!("displab-snap-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let g = make_grid(16, 2.5).unwrap();
        let u = Field1D::from_fn(&g, |x| Complex64::new(x.sin(), x * 0.1));
        let p = dir.join("u.bin");
        write_snapshot(&p, &u, 0.75).unwrap();
        let (v, t) = read_snapshot(&p).unwrap();
        assert_eq!(t, 0.75);
        assert_eq!(v.values(), u.values());
        std::fs::remove_dir_all(&dir).ok();
    }
}
