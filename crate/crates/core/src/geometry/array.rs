//! MIMO virtual array geometry.
//!
//! Array frame: `x` runs along the array (and along the synthetic aperture when
//! the sensor is side-looking), `y` is boresight and `z` is up.
//!
//! A virtual element (VX) sits at the two-way phase center of its TX/RX pair,
//! `(tx + rx) / 2`. With that convention a VX pair separated by `D_v` behaves
//! like two monostatic elements `D_v` apart, so its interferometric phase is
//! `4 pi D_v sin(phi) / lambda`.

use nalgebra::Vector3;

pub type Vec3 = Vector3<f64>;

/// Horizontal positions closer than this are treated as identical.
pub const HORIZONTAL_TOLERANCE_M: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VirtualElement {
    pub tx_index: usize,
    pub rx_index: usize,
    pub position: Vec3,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VerticalBaseline {
    pub lower: usize,
    pub upper: usize,
    /// Vertical separation of the two VX phase centers, meters.
    pub length: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct VirtualArray {
    pub tx_positions: Vec<Vec3>,
    pub rx_positions: Vec<Vec3>,
    pub vx_elements: Vec<VirtualElement>,
    pub vertical_baselines: Vec<VerticalBaseline>,
}

impl VirtualArray {
    pub fn num_tx(&self) -> usize {
        self.tx_positions.len()
    }

    pub fn num_rx(&self) -> usize {
        self.rx_positions.len()
    }

    pub fn num_vx(&self) -> usize {
        self.vx_elements.len()
    }

    /// Index of the VX formed by `tx` and `rx`.
    pub fn vx_index(&self, tx: usize, rx: usize) -> Option<usize> {
        (tx < self.num_tx() && rx < self.num_rx()).then(|| tx * self.num_rx() + rx)
    }

    /// Default two-layer layout: four RX at half-wavelength pitch, two TX on
    /// the lower layer `2 lambda` apart and a third TX raised by `lambda / 2`.
    /// Yields 8 + 4 VX on layers `lambda / 4` apart with four vertical baselines.
    pub fn two_layer_default(wavelength: f64) -> Self {
        let l = wavelength;
        let rx = (0..4)
            .map(|i| Vec3::new(i as f64 * l / 2.0, 0.0, 0.0))
            .collect();
        let tx = vec![
            Vec3::new(0.0, 0.0, 0.0),
            Vec3::new(2.0 * l, 0.0, 0.0),
            Vec3::new(0.0, 0.0, l / 2.0),
        ];
        build_virtual_array(tx, rx)
    }
}

/// Forms every TX/RX pair (TX-major order) and enumerates the vertical
/// baselines between them.
pub fn build_virtual_array(tx_positions: Vec<Vec3>, rx_positions: Vec<Vec3>) -> VirtualArray {
    let vx_elements: Vec<VirtualElement> = tx_positions
        .iter()
        .enumerate()
        .flat_map(|(ti, tx)| {
            rx_positions
                .iter()
                .enumerate()
                .map(move |(ri, rx)| VirtualElement {
                    tx_index: ti,
                    rx_index: ri,
                    position: (tx + rx) / 2.0,
                })
        })
        .collect();

    let mut vertical_baselines = Vec::new();
    for i in 0..vx_elements.len() {
        for j in (i + 1)..vx_elements.len() {
            let a = vx_elements[i].position;
            let b = vx_elements[j].position;
            let same_horizontal = (a.x - b.x).abs() <= HORIZONTAL_TOLERANCE_M
                && (a.y - b.y).abs() <= HORIZONTAL_TOLERANCE_M;
            let dz = b.z - a.z;
            if !same_horizontal || dz.abs() <= HORIZONTAL_TOLERANCE_M {
                continue;
            }
            let (lower, upper) = if dz > 0.0 { (i, j) } else { (j, i) };
            vertical_baselines.push(VerticalBaseline {
                lower,
                upper,
                length: dz.abs(),
            });
        }
    }

    VirtualArray {
        tx_positions,
        rx_positions,
        vx_elements,
        vertical_baselines,
    }
}
