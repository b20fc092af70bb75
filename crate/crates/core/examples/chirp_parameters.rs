// Derived waveform quantities and the default two-layer virtual array.

use insar::geometry::{derive_chirp_params, ChirpConfig, VirtualArray};

pub fn run_example() -> insar::Result<()> {
    let cfg = ChirpConfig::automotive();
    let d = derive_chirp_params(&cfg)?;
    println!("wavelength        {:.3} mm", d.wavelength * 1e3);
    println!("bandwidth         {:.1} MHz", d.bandwidth / 1e6);
    println!("pulse length      {:.1} us", d.pulse_length * 1e6);
    println!("range resolution  {:.1} cm", d.range_resolution * 100.0);
    println!("max range         {:.1} m", d.max_range);
    println!("effective PRI     {:.1} us", d.effective_pri * 1e6);

    let array = VirtualArray::two_layer_default(d.wavelength);
    println!("\n{} TX x {} RX -> {} VX", array.num_tx(), array.num_rx(), array.num_vx());
    for (k, vx) in array.vx_elements.iter().enumerate() {
        println!(
            "  vx{k:02}  tx{} rx{}  x = {:6.3} mm  z = {:5.3} mm",
            vx.tx_index,
            vx.rx_index,
            vx.position.x * 1e3,
            vx.position.z * 1e3
        );
    }
    for b in &array.vertical_baselines {
        println!("  baseline vx{:02} -> vx{:02}: {:.4} mm", b.lower, b.upper, b.length * 1e3);
    }
    Ok(())
}

fn main() -> insar::Result<()> {
    run_example()
}
