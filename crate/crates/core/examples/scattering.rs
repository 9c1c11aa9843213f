// Scattering asymptotics of a wave packet: q-boson against phase-model and classical packets.
//
// Run with `cargo run --release --example scattering`.

use qboson::qnum::FloatContext;
use qboson::scattering::{asymptotics_scan, expected_packet_norm, BumpProfile, ScanSettings, WavePacket};

pub fn run_example() -> qboson::Result<()> {
    let ctx = FloatContext::float(0.5)?;
    let packet = WavePacket::new(BumpProfile::new(vec![2.6, -0.4], vec![0.3, 0.3])?, 1, 16)?;
    let (vlo, vhi) = packet.velocity_range();
    println!("velocity-sorting permutation {:?}, velocities in {vlo:.3?} .. {vhi:.3?}", packet.sigma());
    let rows = asymptotics_scan(&ctx, &packet, &[-10.0, 5.0, 10.0, 20.0], &ScanSettings::default())?;
    println!("expected norm {:.6}", expected_packet_norm(&packet));
    println!("{:>6} {:>12} {:>12} {:>12} {:>10}", "t", "‖f+ − f0‖", "‖f− − f0‖", "‖f0 − fcl‖", "‖f±‖");
    for row in &rows {
        println!(
            "{:>6} {:>12.3e} {:>12.3e} {:>12.3e} {:>10.6}",
            row.t, row.norm_fplus_minus_f0, row.norm_fminus_minus_f0, row.norm_f0_minus_fclas, row.norm_fpm
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> qboson::Result<()> {
    run_example()
}
