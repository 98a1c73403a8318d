# Number-basis numerics for the gamma oscillator
