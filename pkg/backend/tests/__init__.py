"""Test suite for the coorbit atoms backend"""
