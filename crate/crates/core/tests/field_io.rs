use illposed_core::field_io::*;
use illposed_core::*;
use proptest::prelude::*;

proptest! {
    #[test]
    fn binary_round_trip_is_bit_exact(dim in 1usize..=2, log_n in 4u32..7, half_width in 0.5..40.0f64, seed in any::<u64>()) {
        let g = UniformPeriodicGrid::new(dim, 1 << log_n, half_width).unwrap();
        let mut state = seed;
        let samples = (0..g.len())
            .map(|_| {
                state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                f64::from_bits(state >> 2) - 1.0
            })
            .collect();
        let f = Field::new(g, samples).unwrap();
        let mut buf = Vec::new();
        write_binary(&f, &mut buf).unwrap();
        let back = read_binary(&buf[..]).unwrap();
        prop_assert_eq!(back.grid(), f.grid());
        let same = back.samples().iter().zip(f.samples()).all(|(a, b)| a.to_bits() == b.to_bits());
        prop_assert!(same);
    }
}

#[test]
fn files_on_disk() {
    let dir = tempfile::tempdir().unwrap();
    let g = UniformPeriodicGrid::new(2, 16, 2.0).unwrap();
    let f = Field::from_fn_2d(g, |x, y| x.sin() * y.cos()).unwrap();
    save_binary(&f, dir.path().join("f.bin")).unwrap();
    assert_eq!(load_binary(dir.path().join("f.bin")).unwrap().samples(), f.samples());
    save_csv(&f, dir.path().join("f.csv")).unwrap();
    let text = std::fs::read_to_string(dir.path().join("f.csv")).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 1 + 256);
    assert_eq!(lines[0], "i1,i2,value");
    let last: Vec<&str> = lines[256].split(',').collect();
    assert_eq!(&last[..2], &["15", "15"]);
    assert_eq!(last[2].parse::<f64>().unwrap(), f.samples()[255]);
    assert!(matches!(load_binary(dir.path().join("missing.bin")), Err(FieldFileError::Io(_))));
}
