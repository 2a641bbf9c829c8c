def average(a, b):
    s = (a+b)/2
    return s

average(2, 6)
print (s)
