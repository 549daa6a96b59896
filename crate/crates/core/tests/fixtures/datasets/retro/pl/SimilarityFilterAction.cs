public class SimilarityFilterAction
{
    public void SearchSimilarity(Similarity similarity)
    {
        _similarityStore.Search(similarity);
    }
    public void ExportFilter(Filter filter)
    {
        _filterStore.Export(filter);
    }
    public void RemoveFilter(Filter filter)
    {
        _filterStore.Remove(filter);
    }
}
