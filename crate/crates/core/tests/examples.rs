//! Every example runs as a test.

macro_rules! example {
    ($module:ident, $file:literal) => {
        #[allow(dead_code)]
        mod $module {
            include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/", $file));
        }
    };
}

example!(chirp_parameters, "chirp_parameters.rs");
example!(simulate_capture, "simulate_capture.rs");
example!(range_profile, "range_profile.rs");
example!(sar_image, "sar_image.rs");
example!(elevation_from_baselines, "elevation_from_baselines.rs");
example!(point_cloud_export, "point_cloud_export.rs");
example!(reflector_accuracy, "reflector_accuracy.rs");

#[test]
fn chirp_parameters_runs() {
    chirp_parameters::run_example().expect("chirp_parameters");
}

#[test]
fn simulate_capture_runs() {
    simulate_capture::run_example().expect("simulate_capture");
}

#[test]
fn range_profile_runs() {
    range_profile::run_example().expect("range_profile");
}

#[test]
fn sar_image_runs() {
    sar_image::run_example().expect("sar_image");
}

#[test]
fn elevation_from_baselines_runs() {
    elevation_from_baselines::run_example().expect("elevation_from_baselines");
}

#[test]
fn point_cloud_export_runs() {
    point_cloud_export::run_example().expect("point_cloud_export");
}

#[test]
fn reflector_accuracy_runs() {
    reflector_accuracy::run_example().expect("reflector_accuracy");
}
