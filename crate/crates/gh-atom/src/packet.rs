//! Wavepacket runs with node amplitudes evaluated in parallel, and the
//! field dump format.

use std::io::Write;

use gh_atom_core::scatter_at;
use gh_atom_core::shifts::Channel;
use gh_atom_core::wavepacket::{report_from_nodes, PacketNodes, ShiftReport};
use gh_atom_core::{PacketField, PacketSpec, ScaledParams, ShiftOptions};
use rayon::prelude::*;

use crate::{fmt_num, CliError};

pub const FIELD_HEADER: [&str; 5] = ["x", "y", "re", "im", "abs2"];

/// Node amplitudes for `channel`, computed on `pool` and collected in node
/// order, so the result does not depend on the thread count.
pub fn nodes(
    p: &ScaledParams,
    spec: &PacketSpec,
    channel: Channel,
    pool: &rayon::ThreadPool,
) -> Result<PacketNodes, CliError> {
    spec.validate(p.width)?;
    let k = spec.node_wavevectors();
    let amps = pool.install(|| {
        k.par_iter()
            .map(|&(kx, ky)| scatter_at(p, kx, ky).map(|s| channel.amplitude(&s)))
            .collect::<Result<Vec<_>, _>>()
    })?;
    let nodes = PacketNodes::from_amplitudes(spec, channel, amps)?;
    Ok(nodes)
}

pub fn report(
    p: &ScaledParams,
    spec: &PacketSpec,
    channel: Channel,
    opts: &ShiftOptions,
    pool: &rayon::ThreadPool,
) -> Result<(PacketNodes, ShiftReport), CliError> {
    let n = nodes(p, spec, channel, pool)?;
    let r = report_from_nodes(p, spec, &n, opts)?;
    Ok((n, r))
}

/// One line per lattice site, x fastest.
pub fn write_field_csv<W: Write>(out: W, field: &PacketField) -> Result<(), std::io::Error> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(FIELD_HEADER)?;
    for (iy, &y) in field.ys.iter().enumerate() {
        for (ix, &x) in field.xs.iter().enumerate() {
            let v = field.at(ix, iy);
            w.write_record([fmt_num(x), fmt_num(y), fmt_num(v.re), fmt_num(v.im), fmt_num(v.norm_sqr())])?;
        }
    }
    w.flush()
}
