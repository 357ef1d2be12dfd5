# Cipher package
