"""Legendrian surgery, open books and Lefschetz fibration bookkeeping."""
