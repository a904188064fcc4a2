"""Zipf's meaning laws: ingestion, binning, power-law fits and two-regime breakpoints"""
