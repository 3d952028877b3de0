# experiments: scaling sweeps, opt tables, reports and the calgame CLI
