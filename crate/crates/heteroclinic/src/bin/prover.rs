fn main() {
    // wired up once the proof pipeline lands
}
