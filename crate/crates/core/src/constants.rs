//! Bloch constants `c_D` of bounded symmetric domains and the class of
//! domains with `c_D < 1`.

use serde::{Deserialize, Serialize};

use crate::domain::Domain;
use crate::error::Result;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BlochConstantEntry {
    pub descriptor: Domain,
    pub value: f64,
    pub formula: String,
}

/// Whether an irreducible factor is biholomorphic to the unit disk.
pub fn is_disk_factor(d: &Domain) -> bool {
    matches!(
        d,
        Domain::Disk
            | Domain::Ball(1)
            | Domain::Polydisk(1)
            | Domain::CartanI { m: 1, n: 1 }
            | Domain::CartanII(1)
            | Domain::CartanIII(2)
            | Domain::CartanIV(1)
    )
}

/// The irreducible factors: polydisks split into disks, products are flattened.
pub fn standard_form(d: &Domain) -> Result<Vec<Domain>> {
    d.validate()?;
    Ok(match d {
        Domain::Polydisk(n) => vec![Domain::Disk; *n],
        Domain::Product(fs) => {
            let mut out = Vec::new();
            for f in fs {
                out.extend(standard_form(f)?);
            }
            out
        }
        other => vec![other.clone()],
    })
}

fn irreducible_entry(d: &Domain) -> BlochConstantEntry {
    let entry = |value: f64, formula: String| BlochConstantEntry { descriptor: d.clone(), value, formula };
    if is_disk_factor(d) {
        return entry(1.0, "1 (disk)".into());
    }
    match d {
        Domain::Ball(n) => {
            let v = (2.0 / (*n as f64 + 1.0)).sqrt();
            entry(v, format!("sqrt(2/(n+m)) as cartan1({n},1) = sqrt(2/{})", n + 1))
        }
        Domain::CartanI { m, n } => entry((2.0 / (m + n) as f64).sqrt(), format!("sqrt(2/(n+m)) = sqrt(2/{})", m + n)),
        Domain::CartanII(n) => entry((2.0 / (*n as f64 + 1.0)).sqrt(), format!("sqrt(2/(n+1)) = sqrt(2/{})", n + 1)),
        Domain::CartanIII(n) => entry((1.0 / (*n as f64 - 1.0)).sqrt(), format!("sqrt(1/(n-1)) = sqrt(1/{})", n - 1)),
        Domain::CartanIV(n) => entry((2.0 / *n as f64).sqrt(), format!("sqrt(2/n) = sqrt(2/{n})")),
        Domain::Exceptional1 => entry(1.0 / 6f64.sqrt(), "1/sqrt(6)".into()),
        Domain::Exceptional2 => entry(1.0 / 3.0, "1/3".into()),
        _ => unreachable!("reducible domain {d}"),
    }
}

/// `c_D`, the largest Bloch seminorm of a holomorphic map of `D` into the
/// unit disk. Products take the maximum over their irreducible factors.
pub fn bloch_constant(d: &Domain) -> Result<f64> {
    Ok(bloch_constant_entry(d)?.value)
}

pub fn bloch_constant_entry(d: &Domain) -> Result<BlochConstantEntry> {
    let factors = standard_form(d)?;
    let entries: Vec<BlochConstantEntry> = factors.iter().map(irreducible_entry).collect();
    if entries.len() == 1 {
        let mut e = entries.into_iter().next().unwrap();
        e.descriptor = d.clone();
        return Ok(e);
    }
    let value = entries.iter().map(|e| e.value).fold(0.0, f64::max);
    let parts: Vec<String> = entries.iter().map(|e| format!("{:.6}", e.value)).collect();
    Ok(BlochConstantEntry { descriptor: d.clone(), value, formula: format!("max({})", parts.join(", ")) })
}

/// Membership in the class of domains with `c_D < 1`, which is the class of
/// domains without a disk factor in standard form. Both characterizations
/// are computed and must agree.
pub fn in_class_d(d: &Domain) -> Result<bool> {
    let by_value = bloch_constant(d)? < 1.0;
    let by_factors = !standard_form(d)?.iter().any(is_disk_factor);
    assert_eq!(by_value, by_factors, "c_D and standard form disagree for {d}");
    Ok(by_value)
}

/// Representative domains of every class, used by the `constants` table and
/// the isometry checks.
pub fn registry_domains() -> Vec<Domain> {
    vec![
        Domain::Disk,
        Domain::Ball(2),
        Domain::Ball(5),
        Domain::Polydisk(2),
        Domain::CartanI { m: 3, n: 2 },
        Domain::CartanII(2),
        Domain::CartanII(3),
        Domain::CartanIII(5),
        Domain::CartanIV(5),
        Domain::Exceptional1,
        Domain::Exceptional2,
        Domain::Product(vec![Domain::Ball(2), Domain::Polydisk(1)]),
        Domain::Product(vec![Domain::Ball(3), Domain::CartanII(2)]),
    ]
}

pub fn table() -> Vec<BlochConstantEntry> {
    registry_domains()
        .iter()
        .map(|d| bloch_constant_entry(d).expect("registry domains are valid"))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn table_examples() {
        assert_eq!(bloch_constant(&Domain::CartanI { m: 1, n: 1 }).unwrap(), 1.0);
        assert_relative_eq!(bloch_constant(&Domain::Ball(2)).unwrap(), 0.816_496_580_927_726, epsilon = 1e-15);
        let p = Domain::Product(vec![Domain::Ball(2), Domain::Polydisk(1)]);
        assert_eq!(bloch_constant(&p).unwrap(), 1.0);
        assert_relative_eq!(bloch_constant(&Domain::Exceptional1).unwrap(), 0.408_248_290_463_863, epsilon = 1e-15);
        assert_relative_eq!(bloch_constant(&Domain::Exceptional2).unwrap(), 1.0 / 3.0);
    }

    #[test]
    fn class_membership_examples() {
        assert!(!in_class_d(&Domain::Polydisk(3)).unwrap());
        assert!(in_class_d(&Domain::Ball(5)).unwrap());
        assert!(in_class_d(&Domain::CartanII(2)).unwrap());
        assert!(!in_class_d(&Domain::CartanIV(1)).unwrap());
        assert!(!in_class_d(&Domain::CartanIII(2)).unwrap());
    }

    #[test]
    fn invalid_dimensions() {
        assert!(bloch_constant(&Domain::CartanIII(1)).is_err());
        assert!(bloch_constant(&Domain::CartanIV(2)).is_err());
    }

    #[test]
    fn low_dimensional_coincidences_agree() {
        // cartan4(3) ~ cartan2(2), cartan4(4) ~ cartan1(2,2), cartan4(6) ~ cartan3(4)
        let c = |d: Domain| bloch_constant(&d).unwrap();
        assert_relative_eq!(c(Domain::CartanIV(3)), c(Domain::CartanII(2)), epsilon = 1e-15);
        assert_relative_eq!(c(Domain::CartanIV(4)), c(Domain::CartanI { m: 2, n: 2 }), epsilon = 1e-15);
        assert_relative_eq!(c(Domain::CartanIV(6)), c(Domain::CartanIII(4)), epsilon = 1e-15);
    }

    #[test]
    fn table_values_in_range() {
        for e in table() {
            assert!(e.value > 0.0 && e.value <= 1.0, "{e:?}");
        }
    }
}
