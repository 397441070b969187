fn main() {
    println!("besovlab cli scaffold");
}
