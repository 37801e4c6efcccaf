use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const KERNEL_MASS_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KernelAtom {
    pub offset: [f64; 2],
    #[serde(rename = "w")]
    pub weight: f64,
}

/// Uniform density on a disk.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Disk {
    pub center: [f64; 2],
    pub radius: f64,
    pub density: f64,
}

impl Disk {
    pub fn mass(&self) -> f64 {
        self.density * PI * self.radius * self.radius
    }
}

/// A 2-D termination kernel: point atoms plus uniform disks, total mass −1,
/// contained in the disk of radius `support_radius` about the origin.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Kernel2D {
    pub support_radius: f64,
    #[serde(default)]
    pub atoms: Vec<KernelAtom>,
    #[serde(default)]
    pub disks: Vec<Disk>,
}

fn norm(v: [f64; 2]) -> f64 {
    v[0].hypot(v[1])
}

impl Kernel2D {
    /// Single atom of weight −1 at the origin: the sharp cut-off.
    pub fn point() -> Self {
        Self {
            support_radius: 0.0,
            atoms: vec![KernelAtom { offset: [0.0, 0.0], weight: -1.0 }],
            disks: Vec::new(),
        }
    }

    /// Uniform density `-1/(πρ²)` on the disk of radius `ρ` at the origin.
    pub fn uniform_disk(radius: f64) -> Result<Self> {
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(Error::InvalidKernel(format!("disk radius must be positive, got {radius}")));
        }
        let k = Self {
            support_radius: radius,
            atoms: Vec::new(),
            disks: vec![Disk {
                center: [0.0, 0.0],
                radius,
                density: -1.0 / (PI * radius * radius),
            }],
        };
        k.check()?;
        Ok(k)
    }

    /// Atoms `(offset, weight)`; the support is the farthest offset.
    pub fn atoms(entries: &[([f64; 2], f64)]) -> Result<Self> {
        let support_radius = entries.iter().map(|e| norm(e.0)).fold(0.0, f64::max);
        let k = Self {
            support_radius,
            atoms: entries
                .iter()
                .map(|&(offset, weight)| KernelAtom { offset, weight })
                .collect(),
            disks: Vec::new(),
        };
        k.check()?;
        Ok(k)
    }

    /// Two atoms of weight −½ at the origin and at `offset`.
    pub fn pair(offset: [f64; 2]) -> Result<Self> {
        Self::atoms(&[([0.0, 0.0], -0.5), (offset, -0.5)])
    }

    pub fn mass(&self) -> f64 {
        self.atoms.iter().map(|a| a.weight).sum::<f64>() + self.disks.iter().map(Disk::mass).sum::<f64>()
    }

    /// Every violated condition, empty when the kernel is valid.
    pub fn failures(&self) -> Vec<String> {
        let mut out = Vec::new();
        if self.atoms.is_empty() && self.disks.is_empty() {
            out.push("kernel has no atoms and no disks".to_string());
        }
        if !(self.support_radius >= 0.0 && self.support_radius.is_finite()) {
            out.push(format!("support radius {} is invalid", self.support_radius));
        }
        let finite = self.atoms.iter().all(|a| a.offset.iter().all(|v| v.is_finite()) && a.weight.is_finite())
            && self.disks.iter().all(|d| {
                d.center.iter().all(|v| v.is_finite()) && d.radius.is_finite() && d.density.is_finite()
            });
        if !finite {
            out.push("non-finite kernel entry".to_string());
        }
        let slack = 1e-12 * self.support_radius.max(1.0);
        for a in &self.atoms {
            if norm(a.offset) > self.support_radius + slack {
                out.push(format!("atom at {:?} lies outside the support radius", a.offset));
            }
        }
        for d in &self.disks {
            if !(d.radius > 0.0) {
                out.push(format!("disk radius {} is not positive", d.radius));
            }
            if norm(d.center) + d.radius > self.support_radius + slack {
                out.push(format!("disk at {:?} leaves the support radius", d.center));
            }
        }
        let mass = self.mass();
        if (mass + 1.0).abs() > KERNEL_MASS_TOL {
            out.push(format!("total mass {mass} differs from -1"));
        }
        out
    }

    pub fn check(&self) -> Result<()> {
        let failures = self.failures();
        if failures.is_empty() {
            Ok(())
        } else {
            Err(Error::InvalidKernel(failures.join("; ")))
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("kernel serialises")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let k: Self =
            serde_json::from_str(text).map_err(|e| Error::InvalidKernel(format!("malformed JSON: {e}")))?;
        k.check()?;
        Ok(k)
    }
}

/// `-(k1 ⊗ k2)`. Atom pairs multiply exactly and atoms shift disks;
/// the convolution of two disks is not an atom or a disk and is rejected.
pub fn combine2d(k1: &Kernel2D, k2: &Kernel2D) -> Result<Kernel2D> {
    k1.check()?;
    k2.check()?;
    if !k1.disks.is_empty() && !k2.disks.is_empty() {
        return Err(Error::Unsupported(
            "combining two kernels that both contain disks".into(),
        ));
    }
    let add = |u: [f64; 2], v: [f64; 2]| [u[0] + v[0], u[1] + v[1]];
    let support_radius = k1.support_radius + k2.support_radius;
    let eps = 1e-12 * support_radius.max(1.0);
    let mut atoms: Vec<KernelAtom> = Vec::new();
    for a in &k1.atoms {
        for b in &k2.atoms {
            let offset = add(a.offset, b.offset);
            let weight = -a.weight * b.weight;
            match atoms
                .iter_mut()
                .find(|c| (c.offset[0] - offset[0]).abs() <= eps && (c.offset[1] - offset[1]).abs() <= eps)
            {
                Some(c) => c.weight += weight,
                None => atoms.push(KernelAtom { offset, weight }),
            }
        }
    }
    let mut disks = Vec::new();
    for (atoms_of, disks_of) in [(&k1.atoms, &k2.disks), (&k2.atoms, &k1.disks)] {
        for a in atoms_of {
            for d in disks_of {
                disks.push(Disk {
                    center: add(a.offset, d.center),
                    radius: d.radius,
                    density: -a.weight * d.density,
                });
            }
        }
    }
    Ok(Kernel2D {
        support_radius,
        atoms,
        disks,
    })
}
