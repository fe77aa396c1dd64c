# Encoding engines and file formats
