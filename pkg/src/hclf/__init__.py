"""Character L-functions and class-count recovery for hyperelliptic curves over finite fields."""
