use std::fs;

use qmc_core::format::{read_points_csv, write_points_csv};
use qmc_core::ld::*;
use qmc_core::QmcError;

#[test]
fn generating_files_drive_generators() {
    let dir = tempfile::tempdir().unwrap();
    let lat = dir.path().join("lattice.txt");
    fs::write(&lat, "# m_max=3\n1\n3\n").unwrap();
    let gen = parse_lattice_vector(&lat).unwrap();
    let b = lattice_points(&gen, 2, 0, 8, Ordering::Natural, Randomization::none()).unwrap();
    assert_eq!(b.row(6), &[0.375, 0.125]);
    assert!(matches!(b_err(&gen), QmcError::Capacity(_)));

    let jk = dir.path().join("joe-kuo.txt");
    fs::write(&jk, "d s a m_i\n2 1 0 1\n3 2 1 1 3\n").unwrap();
    let mats = parse_direction_numbers(&jk, None).unwrap();
    assert_eq!(mats.max_dimension(), 3);
    let ours =
        digital_net_points(&mats, 2, 0, 64, Ordering::Standard, Randomization::none()).unwrap();
    let bundled = digital_net_points(
        default_generating_matrices(),
        2,
        0,
        64,
        Ordering::Standard,
        Randomization::none(),
    )
    .unwrap();
    assert_eq!(ours.values(), bundled.values());
    assert!(matches!(
        parse_direction_numbers(&jk, Some(5)),
        Err(QmcError::Capacity(_))
    ));
}

fn b_err(gen: &LatticeGenVector) -> QmcError {
    lattice_points(gen, 2, 0, 16, Ordering::Natural, Randomization::none()).unwrap_err()
}

#[test]
fn points_csv_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("points.csv");
    let b = halton_points(
        3,
        0,
        100,
        Randomization::new(RandomizationKind::DigitShift, 8),
    )
    .unwrap();
    write_points_csv(fs::File::create(&path).unwrap(), &b).unwrap();
    let text = fs::read_to_string(&path).unwrap();
    assert!(text.starts_with("x1,x2,x3\n"));
    let back = read_points_csv(&path).unwrap();
    assert_eq!(back.values(), b.values());
    assert!(matches!(
        read_points_csv(&dir.path().join("missing.csv")),
        Err(QmcError::Io { .. })
    ));
}
