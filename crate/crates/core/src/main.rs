use std::io;

fn main() {
    let code = clean_group_rings::cli::run(std::env::args_os(), &mut io::stdout(), &mut io::stderr());
    std::process::exit(code);
}
