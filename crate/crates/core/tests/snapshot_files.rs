use disloc2d::spectral_core::{load_snapshot, save_snapshot, Grid, ScalarField2D, SNAPSHOT_MAGIC};

#[test]
fn save_and_load_through_the_filesystem() {
    let dir = tempfile::tempdir().unwrap();
    let g = Grid::new(16, 3.0).unwrap();
    let f = ScalarField2D::from_fn(g, |x1, x2| (x1 * 2.0).sin() - x2.cos() * 1e-300);
    let path = dir.path().join("f.bin");
    save_snapshot(&path, &f, "density").unwrap();
    let bytes = std::fs::read(&path).unwrap();
    assert_eq!(&bytes[..16], SNAPSHOT_MAGIC);
    let (back, name) = load_snapshot(&path).unwrap();
    assert_eq!(name, "density");
    assert_eq!(back.grid(), &g);
    assert!(back.values().iter().zip(f.values()).all(|(a, b)| a.to_bits() == b.to_bits()));
}

#[test]
fn truncated_file_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let g = Grid::standard(8).unwrap();
    let path = dir.path().join("t.bin");
    save_snapshot(&path, &ScalarField2D::constant(g, 1.0), "c").unwrap();
    let bytes = std::fs::read(&path).unwrap();
    std::fs::write(&path, &bytes[..bytes.len() - 8]).unwrap();
    assert!(load_snapshot(&path).is_err());
    assert!(load_snapshot(dir.path().join("absent.bin")).is_err());
}
