use super::{FrequencyGrid, Metadata, Spectrum1D};
use crate::error::Result;
use crate::manifold::{ElectronicManifold, Topology};
use crate::pulse::Pulse;
use crate::units::HBAR_EV_FS;

/// Linear absorption of one edge on the `omega - omega_j` axis:
/// a sum of Lorentzians `w^2 mu^2 Gamma / ((x - x_e)^2 + Gamma^2)` centred
/// at `x_e = omega_{e g0} - omega_j`, one per state dipole-coupled to `g0`.
pub fn xanes(
    manifold: &ElectronicManifold,
    pulse: &Pulse,
    grid: &FrequencyGrid,
) -> Result<Spectrum1D> {
    let topo = Topology::new(manifold)?;
    let lines: Vec<(f64, f64, f64)> = topo.links[topo.ground]
        .iter()
        .filter_map(|l| {
            let w = topo.energy(l.to);
            let weight = pulse.weight_at(w);
            let strength = weight * weight * l.dipole * l.dipole;
            (strength != 0.0).then_some((w - pulse.carrier, strength, l.dephasing))
        })
        .collect();

    let values = grid
        .points()
        .iter()
        .map(|&x| {
            lines
                .iter()
                .map(|&(centre, strength, gamma)| {
                    let d = x - centre;
                    strength * gamma / (d * d + gamma * gamma)
                })
                .sum()
        })
        .collect();

    let mut metadata = Metadata::new();
    metadata.insert("kind".into(), "spectrum1d".into());
    metadata.insert(
        "software".into(),
        format!("xcs2d {}", env!("CARGO_PKG_VERSION")),
    );
    metadata.insert("hbar_eV_fs".into(), HBAR_EV_FS.to_string());
    metadata.insert("carrier_eV".into(), pulse.carrier.to_string());
    metadata.insert("envelope".into(), pulse.envelope.to_string());
    metadata.insert("grid".into(), grid.to_string());
    metadata.insert("component".into(), "xanes".into());
    Ok(Spectrum1D {
        grid: *grid,
        values,
        axis: "omega - omega_j (eV)".into(),
        metadata,
    })
}
