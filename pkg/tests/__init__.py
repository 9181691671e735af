"""Test suite for HC-SVD variable clustering."""
