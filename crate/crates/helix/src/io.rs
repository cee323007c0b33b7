//! CSV formats: curves (`s,x,y,z`), intrinsic profiles (`s,kappa,tau`),
//! frames, and spherical curves (`t,x,y,z`). All numeric output uses
//! shortest round-trip decimal formatting so written files re-read exactly.

use std::io::{BufRead, Write};
use std::path::Path;

use nalgebra::Vector3;

use crate::curve::{CurveSamples, IntrinsicProfile, ProfileKind};
use crate::error::{HelixError, Result};
use crate::frenet::FrenetApparatus;
use crate::indicatrix::SphericalCurve;

pub fn write_curve_csv(path: &Path, curve: &CurveSamples) -> Result<()> {
    let mut out = std::io::BufWriter::new(std::fs::File::create(path)?);
    writeln!(out, "s,x,y,z")?;
    for (s, p) in curve.s.iter().zip(&curve.p) {
        writeln!(out, "{},{},{},{}", s, p.x, p.y, p.z)?;
    }
    Ok(())
}

pub fn read_curve_csv(path: &Path) -> Result<CurveSamples> {
    let file = std::fs::File::open(path)?;
    let mut lines = std::io::BufReader::new(file).lines();
    let header = lines
        .next()
        .ok_or_else(|| HelixError::MalformedInput("empty curve CSV".into()))??;
    if header.trim() != "s,x,y,z" {
        return Err(HelixError::MalformedInput(format!(
            "line 1: expected header `s,x,y,z`, got `{}`",
            header.trim()
        )));
    }
    let mut s = Vec::new();
    let mut p = Vec::new();
    for (i, line) in lines.enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let fields = parse_floats(&line, 4, i + 2)?;
        s.push(fields[0]);
        p.push(Vector3::new(fields[1], fields[2], fields[3]));
    }
    CurveSamples::new(s, p)
}

pub fn write_profile_csv(path: &Path, s: &[f64], kappa: &[f64], tau: &[f64]) -> Result<()> {
    let mut out = std::io::BufWriter::new(std::fs::File::create(path)?);
    writeln!(out, "s,kappa,tau")?;
    for i in 0..s.len() {
        writeln!(out, "{},{},{}", s[i], kappa[i], tau[i])?;
    }
    Ok(())
}

pub fn read_profile_csv(path: &Path) -> Result<IntrinsicProfile> {
    let file = std::fs::File::open(path)?;
    let mut lines = std::io::BufReader::new(file).lines();
    let header = lines
        .next()
        .ok_or_else(|| HelixError::MalformedInput("empty profile CSV".into()))??;
    if header.trim() != "s,kappa,tau" {
        return Err(HelixError::MalformedInput(format!(
            "line 1: expected header `s,kappa,tau`, got `{}`",
            header.trim()
        )));
    }
    let mut records = Vec::new();
    for (i, line) in lines.enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let fields = parse_floats(&line, 3, i + 2)?;
        records.push((fields[0], fields[1], fields[2]));
    }
    if records.len() < 2 {
        return Err(HelixError::MalformedInput(
            "profile CSV needs at least 2 records".into(),
        ));
    }
    let domain = (records[0].0, records[records.len() - 1].0);
    IntrinsicProfile::new(ProfileKind::Tabulated { records }, domain)
}

/// Frames CSV: `s` plus nine components in T,N,B column order.
pub fn write_frames_csv(path: &Path, app: &FrenetApparatus) -> Result<()> {
    let mut out = std::io::BufWriter::new(std::fs::File::create(path)?);
    writeln!(out, "s,tx,ty,tz,nx,ny,nz,bx,by,bz")?;
    for i in 0..app.len() {
        let (t, n, b) = (&app.t[i], &app.n[i], &app.b[i]);
        writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{}",
            app.s[i], t.x, t.y, t.z, n.x, n.y, n.z, b.x, b.y, b.z
        )?;
    }
    Ok(())
}

/// Spherical-curve CSV: `t,x,y,z`, optionally with a trailing `k_g` column.
pub fn write_spherical_csv(path: &Path, sc: &SphericalCurve, k_g: Option<&[f64]>) -> Result<()> {
    let mut out = std::io::BufWriter::new(std::fs::File::create(path)?);
    match k_g {
        Some(_) => writeln!(out, "t,x,y,z,k_g")?,
        None => writeln!(out, "t,x,y,z")?,
    }
    for i in 0..sc.len() {
        let g = &sc.gamma[i];
        match k_g {
            Some(kg) => writeln!(out, "{},{},{},{},{}", sc.t[i], g.x, g.y, g.z, kg[i])?,
            None => writeln!(out, "{},{},{},{}", sc.t[i], g.x, g.y, g.z)?,
        }
    }
    Ok(())
}

fn parse_floats(line: &str, expect: usize, line_no: usize) -> Result<Vec<f64>> {
    let fields: Vec<&str> = line.trim().split(',').collect();
    if fields.len() != expect {
        return Err(HelixError::MalformedInput(format!(
            "line {line_no}: expected {expect} fields, got {}",
            fields.len()
        )));
    }
    fields
        .iter()
        .map(|f| {
            f.trim().parse::<f64>().map_err(|_| {
                HelixError::MalformedInput(format!("line {line_no}: `{f}` is not a number"))
            })
        })
        .collect()
}
