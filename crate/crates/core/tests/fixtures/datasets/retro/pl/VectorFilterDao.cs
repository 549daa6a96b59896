public class VectorFilterDao
{
    public void SubmitVector(Vector vector)
    {
        _vectorStore.Submit(vector);
    }
    public void SearchFilter(Filter filter)
    {
        _filterStore.Search(filter);
    }
    public void SearchVector(Vector vector)
    {
        _vectorStore.Search(vector);
    }
}
