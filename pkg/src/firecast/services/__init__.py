"""Services package: cube I/O, sampling, training and evaluation."""
