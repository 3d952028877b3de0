# engine package: game loop, configuration, results
